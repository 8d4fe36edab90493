#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <sstream>

#include "granular/errors.hpp"
#include "granular/io.hpp"

using namespace granular;

TEST_CASE("17-digit formatting round-trips doubles")
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 20000)
    {
        double x;
        std::uint64_t b = bits(rng);
        std::memcpy(&x, &b, sizeof x);
        if (!std::isfinite(x))
            continue;
        double y = std::strtod(io::format_double(x).c_str(), nullptr);
        REQUIRE(std::memcmp(&x, &y, sizeof x) == 0);
        ++checked;
    }
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(INFINITY) == "inf");
    CHECK(io::format_double(NAN) == "nan");
}

TEST_CASE("FNV-1a reference digests")
{
    CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("momentum column names")
{
    CHECK(io::momentum_columns(2) == std::vector<std::string>{"px", "py"});
    CHECK(io::momentum_columns(3) == std::vector<std::string>{"px", "py", "pz"});
    CHECK(io::momentum_columns(4) == std::vector<std::string>{"p1", "p2", "p3", "p4"});
}

TEST_CASE("series CSV round trip")
{
    MomentSeries s(3);
    for (int k = 0; k < 5; ++k)
    {
        MomentRecord r;
        r.t = 0.1 * k;
        r.E = std::exp(-0.3 * k);
        r.m_half = std::sqrt(r.E) * 0.9;
        r.m_three_half = std::pow(r.E, 1.5) * 1.1;
        r.p = {1e-17 * k, -2e-18, 3e-19};
        r.n_collisions = 1000u * static_cast<unsigned>(k);
        r.dt = k ? 0.1 : 0.0;
        s.append(r);
    }
    std::ostringstream os;
    io::write_series_csv(os, s, "0123456789abcdef");
    std::string const text = os.str();
    CHECK(text.rfind("# config_hash=0123456789abcdef\nt,E,m_half,m_three_half,px,py,pz,n_coll,dt\n", 0) == 0);

    std::istringstream is(text);
    auto back = io::read_series_csv(is);
    REQUIRE(back.size() == s.size());
    CHECK(back.dim() == 3);
    for (std::size_t k = 0; k < s.size(); ++k)
    {
        CHECK(back[k].t == s[k].t);
        CHECK(back[k].E == s[k].E);
        CHECK(back[k].m_half == s[k].m_half);
        CHECK(back[k].m_three_half == s[k].m_three_half);
        CHECK(back[k].p == s[k].p);
        CHECK(back[k].n_collisions == s[k].n_collisions);
        CHECK(back[k].dt == s[k].dt);
    }
}

TEST_CASE("series CSV reader errors")
{
    std::istringstream empty("");
    CHECK_THROWS_AS(io::read_series_csv(empty), InputError);
    std::istringstream no_e("t,F\n0,1\n");
    CHECK_THROWS_AS(io::read_series_csv(no_e), InputError);
    std::istringstream ragged("t,E\n0,1\n1\n");
    CHECK_THROWS_AS(io::read_series_csv(ragged), InputError);
    std::istringstream bad("t,E\n0,abc\n");
    CHECK_THROWS_AS(io::read_series_csv(bad), InputError);
    std::istringstream minimal("t,E\n0,1\n1,0.5\n");
    auto s = io::read_series_csv(minimal);
    CHECK(s.size() == 2);
    CHECK(std::isnan(s[0].m_three_half));
}

TEST_CASE("profile CSV round trip")
{
    auto h = make_histogram(8, 2.0);
    for (std::size_t b = 0; b < 8; ++b)
        h.masses[b] = 0.1 + 0.005 * static_cast<double>(b);
    h.overflow = 0.0625;
    std::ostringstream os;
    io::write_profile_csv(os, h);
    std::istringstream is(os.str());
    auto back = io::read_profile_csv(is);
    CHECK(back.bin_edges == h.bin_edges);
    CHECK(back.masses == h.masses);
    CHECK(back.overflow == h.overflow);

    std::istringstream bad("bin_lo,bin_hi,mass\n0,1,0.5\n2,3,0.5\n");
    CHECK_THROWS_AS(io::read_profile_csv(bad), InputError);
    std::istringstream hdr("lo,hi,m\n");
    CHECK_THROWS_AS(io::read_profile_csv(hdr), InputError);
}

TEST_CASE("snapshot CSV round trip")
{
    auto ens = init_ensemble(50, 3, InitialDistribution::two_temperature, 4);
    std::ostringstream os;
    io::write_snapshot_csv(os, ens, "feed");
    CHECK(os.str().rfind("# config_hash=feed\nd,N\n3,50\n", 0) == 0);
    std::istringstream is(os.str());
    CHECK(io::read_snapshot_csv(is) == ens);

    std::istringstream short_file("d,N\n2,3\n1,2\n3,4\n");
    CHECK_THROWS_AS(io::read_snapshot_csv(short_file), InputError);
}

TEST_CASE("scaling and l1 CSV layouts")
{
    ScalingMap m{{0, 1}, {1, 2}, {0, std::log(2.0)}, 1, 0};
    std::ostringstream os;
    io::write_scaling_csv(os, m);
    CHECK(os.str() == "t,V,T\n0,1,0\n1,2,0.69314718055994529\n");

    std::ostringstream ol;
    io::write_l1_csv(ol, {0, 1}, {2, 0.5}, "ab");
    CHECK(ol.str() == "# config_hash=ab\ns,l1\n0,2\n1,0.5\n");
}
