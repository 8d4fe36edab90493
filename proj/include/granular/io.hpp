#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "granular/ensemble.hpp"
#include "granular/scaling.hpp"

namespace granular::io
{

//! Shortest-safe round-trip formatting: 17 significant digits.
std::string format_double(double x);

//! 64-bit FNV-1a digest rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/*
 * CSV layouts. Each file starts with a "# config_hash=<hex>" comment line
 * when a hash is supplied.
 *
 *   series:   t,E,m_half,m_three_half,px,py[,pz],n_coll,dt
 *   profile:  bin_lo,bin_hi,mass   (last row is the overflow, bin_hi = inf)
 *   scaling:  t,V,T
 *   l1:       s,l1
 *   snapshot: d,N header row, one value row, then one velocity per row
 */
void write_series_csv(std::ostream& os, MomentSeries const& series, std::string const& hash = {});
MomentSeries read_series_csv(std::istream& is);

void write_profile_csv(std::ostream& os, ProfileHistogram const& h, std::string const& hash = {});
ProfileHistogram read_profile_csv(std::istream& is);

void write_scaling_csv(std::ostream& os, ScalingMap const& map, std::string const& hash = {});

void write_l1_csv(std::ostream& os,
                  std::vector<double> const& s,
                  std::vector<double> const& l1,
                  std::string const& hash = {});

void write_snapshot_csv(std::ostream& os, VelocityEnsemble const& ens, std::string const& hash = {});
VelocityEnsemble read_snapshot_csv(std::istream& is);

//! Momentum column names for dimension d (px,py,pz for d <= 3, else p1..pd).
std::vector<std::string> momentum_columns(int dim);

void write_file(std::filesystem::path const& path, std::string const& contents);

}  // namespace granular::io
