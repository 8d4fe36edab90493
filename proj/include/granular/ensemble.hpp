#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace granular
{

//---------------------------------------------------------------------------//
/*!
 * N equal-weight velocity samples in d dimensions.
 *
 * Velocities are stored contiguously (particle-major). Each particle carries
 * mass 1/N so that the empirical measure has unit mass.
 */
class VelocityEnsemble
{
  public:
    VelocityEnsemble(int dim, std::vector<double> velocities);

    int dim() const { return dim_; }
    std::size_t size() const { return v_.size() / static_cast<std::size_t>(dim_); }

    std::span<double> velocity(std::size_t i)
    {
        return {v_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<double const> velocity(std::size_t i) const
    {
        return {v_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<double> data() { return v_; }
    std::span<double const> data() const { return v_; }

    //! Multiply every velocity component by factor.
    void scale(double factor);

    bool operator==(VelocityEnsemble const&) const = default;

  private:
    int dim_;
    std::vector<double> v_;
};

enum class InitialDistribution
{
    maxwellian,
    uniform_ball,
    two_temperature
};

std::string to_string(InitialDistribution d);
InitialDistribution parse_initial_distribution(std::string const& name);

//! Random ensemble normalized to zero momentum and unit energy.
VelocityEnsemble
init_ensemble(std::size_t n, int dim, InitialDistribution dist, std::uint64_t seed);

//! Shift to zero mean velocity and rescale to unit energy.
void normalize_to_G(VelocityEnsemble& ens);

//! m_l = (1/N) Σ |v_i|^{2l}, compensated summation.
double moment(VelocityEnsemble const& ens, double l);
inline double energy(VelocityEnsemble const& ens) { return moment(ens, 1.0); }
std::vector<double> mean_velocity(VelocityEnsemble const& ens);
double max_speed(VelocityEnsemble const& ens);

//---------------------------------------------------------------------------//
// Time series of moments

struct MomentRecord
{
    double t = 0;
    double E = 0;
    double m_half = 0;
    double m_three_half = 0;
    std::vector<double> p;
    std::uint64_t n_collisions = 0;
    double dt = 0;
};

class MomentSeries
{
  public:
    MomentSeries() = default;
    explicit MomentSeries(int dim) : dim_(dim) {}

    //! Throws InputError unless t is strictly greater than the last record.
    void append(MomentRecord rec);

    int dim() const { return dim_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    MomentRecord const& operator[](std::size_t i) const { return records_[i]; }
    MomentRecord const& back() const { return records_.back(); }
    std::vector<MomentRecord> const& records() const { return records_; }

    std::vector<double> times() const;
    std::vector<double> energies() const;

    //! Keep only the first count records.
    void truncate(std::size_t count);

  private:
    int dim_ = 0;
    std::vector<MomentRecord> records_;
};

//! One pass over the ensemble: E, m_{1/2}, m_{3/2}, mean momentum.
MomentRecord
measure(VelocityEnsemble const& ens, double t, std::uint64_t n_collisions, double dt);

//---------------------------------------------------------------------------//
// Speed histograms

struct ProfileHistogram
{
    std::vector<double> bin_edges;  //!< bins+1 increasing speeds from 0
    std::vector<double> masses;  //!< probability mass per bin
    double overflow = 0;  //!< mass above the last edge
    std::size_t n_samples = 0;

    std::size_t bins() const { return masses.size(); }
};

//! Mass-normalized histogram of |v_i| on [0, v_max] with overflow bin.
ProfileHistogram
radial_histogram(VelocityEnsemble const& ens, std::size_t bins, double v_max);

//! Empty histogram with uniform bins.
ProfileHistogram make_histogram(std::size_t bins, double v_max);

//! Bin masses of the Maxwellian speed law with given energy ∫|v|^2 f = E.
ProfileHistogram
maxwellian_speed_histogram(int dim, double energy, std::size_t bins, double v_max);

}  // namespace granular
