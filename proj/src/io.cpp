#include "granular/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "granular/errors.hpp"

namespace granular::io
{

std::string format_double(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    std::array<char, 40> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i)
    {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::vector<std::string> momentum_columns(int dim)
{
    std::vector<std::string> cols;
    if (dim <= 3)
    {
        static constexpr char const* names[] = {"px", "py", "pz"};
        for (int k = 0; k < dim; ++k)
            cols.emplace_back(names[k]);
    }
    else
    {
        for (int k = 1; k <= dim; ++k)
            cols.push_back("p" + std::to_string(k));
    }
    return cols;
}

namespace
{
void write_hash(std::ostream& os, std::string const& hash)
{
    if (!hash.empty())
        os << "# config_hash=" << hash << '\n';
}

std::vector<std::string> split(std::string const& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_double(std::string const& s)
{
    if (s == "inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    if (s == "nan" || s.empty())
        return NAN;
    double x = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("malformed number '" + s + "' in CSV");
    return x;
}

//! Next non-comment line; false at end of stream.
bool next_line(std::istream& is, std::string& line)
{
    while (std::getline(is, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        return true;
    }
    return false;
}
}  // namespace

void write_series_csv(std::ostream& os, MomentSeries const& series, std::string const& hash)
{
    write_hash(os, hash);
    os << "t,E,m_half,m_three_half";
    for (auto const& c : momentum_columns(series.dim()))
        os << ',' << c;
    os << ",n_coll,dt\n";
    for (auto const& r : series.records())
    {
        os << format_double(r.t) << ',' << format_double(r.E) << ',' << format_double(r.m_half)
           << ',' << format_double(r.m_three_half);
        for (double p : r.p)
            os << ',' << format_double(p);
        os << ',' << r.n_collisions << ',' << format_double(r.dt) << '\n';
    }
}

MomentSeries read_series_csv(std::istream& is)
{
    std::string line;
    if (!next_line(is, line))
        throw InputError("series CSV is empty");
    auto const header = split(line);
    auto col = [&](std::string const& name) -> long {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return static_cast<long>(i);
        return -1;
    };
    long const it = col("t"), ie = col("E");
    if (it < 0 || ie < 0)
        throw InputError("series CSV needs t and E columns");
    long const ih = col("m_half"), i3 = col("m_three_half"), in = col("n_coll"), idt = col("dt");
    std::vector<long> ip;
    for (int d = 1; d <= 16; ++d)
    {
        std::vector<long> found;
        for (auto const& c : momentum_columns(d))
            found.push_back(col(c));
        bool all = true;
        for (long f : found)
            all = all && f >= 0;
        if (all)
            ip = found;
    }

    MomentSeries series(static_cast<int>(ip.size()));
    while (next_line(is, line))
    {
        auto const cells = split(line);
        if (cells.size() != header.size())
            throw InputError("series CSV row has " + std::to_string(cells.size())
                             + " cells, header has " + std::to_string(header.size()));
        MomentRecord r;
        r.t = parse_double(cells[it]);
        r.E = parse_double(cells[ie]);
        r.m_half = ih >= 0 ? parse_double(cells[ih]) : NAN;
        r.m_three_half = i3 >= 0 ? parse_double(cells[i3]) : NAN;
        for (long k : ip)
            r.p.push_back(parse_double(cells[k]));
        r.n_collisions = in >= 0 ? static_cast<std::uint64_t>(std::stoull(cells[in])) : 0;
        r.dt = idt >= 0 ? parse_double(cells[idt]) : NAN;
        series.append(std::move(r));
    }
    return series;
}

void write_profile_csv(std::ostream& os, ProfileHistogram const& h, std::string const& hash)
{
    write_hash(os, hash);
    os << "bin_lo,bin_hi,mass\n";
    for (std::size_t b = 0; b < h.bins(); ++b)
        os << format_double(h.bin_edges[b]) << ',' << format_double(h.bin_edges[b + 1]) << ','
           << format_double(h.masses[b]) << '\n';
    os << format_double(h.bin_edges.back()) << ",inf," << format_double(h.overflow) << '\n';
}

ProfileHistogram read_profile_csv(std::istream& is)
{
    std::string line;
    if (!next_line(is, line) || split(line) != std::vector<std::string>{"bin_lo", "bin_hi", "mass"})
        throw InputError("profile CSV needs header bin_lo,bin_hi,mass");
    ProfileHistogram h;
    while (next_line(is, line))
    {
        auto const c = split(line);
        if (c.size() != 3)
            throw InputError("profile CSV row must have 3 cells");
        double const lo = parse_double(c[0]), hi = parse_double(c[1]), m = parse_double(c[2]);
        if (std::isinf(hi))
        {
            h.overflow = m;
            continue;
        }
        if (h.bin_edges.empty())
            h.bin_edges.push_back(lo);
        else if (lo != h.bin_edges.back())
            throw InputError("profile CSV bins are not contiguous");
        if (!(hi > lo))
            throw InputError("profile CSV bins are not increasing");
        h.bin_edges.push_back(hi);
        h.masses.push_back(m);
    }
    if (h.masses.empty())
        throw InputError("profile CSV has no bins");
    return h;
}

void write_scaling_csv(std::ostream& os, ScalingMap const& map, std::string const& hash)
{
    write_hash(os, hash);
    os << "t,V,T\n";
    for (std::size_t k = 0; k < map.t.size(); ++k)
        os << format_double(map.t[k]) << ',' << format_double(map.V[k]) << ','
           << format_double(map.T[k]) << '\n';
}

void write_l1_csv(std::ostream& os,
                  std::vector<double> const& s,
                  std::vector<double> const& l1,
                  std::string const& hash)
{
    write_hash(os, hash);
    os << "s,l1\n";
    for (std::size_t k = 0; k < s.size(); ++k)
        os << format_double(s[k]) << ',' << format_double(l1[k]) << '\n';
}

void write_snapshot_csv(std::ostream& os, VelocityEnsemble const& ens, std::string const& hash)
{
    write_hash(os, hash);
    os << "d,N\n" << ens.dim() << ',' << ens.size() << '\n';
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        auto v = ens.velocity(i);
        for (int k = 0; k < ens.dim(); ++k)
            os << (k ? "," : "") << format_double(v[k]);
        os << '\n';
    }
}

VelocityEnsemble read_snapshot_csv(std::istream& is)
{
    std::string line;
    if (!next_line(is, line) || line != "d,N")
        throw InputError("snapshot CSV needs a d,N header");
    if (!next_line(is, line))
        throw InputError("snapshot CSV is missing the d,N values");
    auto const dn = split(line);
    if (dn.size() != 2)
        throw InputError("snapshot CSV d,N row malformed");
    int const dim = std::stoi(dn[0]);
    std::size_t const n = std::stoull(dn[1]);
    std::vector<double> v;
    v.reserve(n * static_cast<std::size_t>(dim));
    while (next_line(is, line))
    {
        auto const cells = split(line);
        if (static_cast<int>(cells.size()) != dim)
            throw InputError("snapshot CSV row has wrong dimension");
        for (auto const& c : cells)
            v.push_back(parse_double(c));
    }
    if (v.size() != n * static_cast<std::size_t>(dim))
        throw InputError("snapshot CSV particle count does not match header");
    return VelocityEnsemble(dim, std::move(v));
}

void write_file(std::filesystem::path const& path, std::string const& contents)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw InputError("cannot open " + path.string() + " for writing");
    os << contents;
    if (!os)
        throw InputError("failed writing " + path.string());
}

}  // namespace granular::io
