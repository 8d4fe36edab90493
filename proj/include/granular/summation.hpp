#pragma once

#include <cmath>

namespace granular
{

//! Neumaier (improved Kahan) compensated accumulator.
class CompensatedSum
{
  public:
    void add(double x)
    {
        double const t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace granular
