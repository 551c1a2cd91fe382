#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace alohamon::cli {

/// Desk-scale overrides for the figure recipes; negative/empty fields keep
/// the recipe defaults.
struct FigureOverrides {
  std::int64_t slots = -1;
  std::uint64_t seed = 1;
  std::string m_list;
  std::string eta_list;
  int grid_resolution = 11;
  int refine_budget = 500;
  double tolerance = 1e-12;
  int workers = 0;
};

/// Writes the plot-ready CSV data for one of the named figure recipes
/// (fig2..fig6) under the given path prefix.
void emit_figure(const std::string& name, const std::string& prefix,
                 const FigureOverrides& overrides);

/// Long-format sweep table shared by the sweep modes and fig5/fig6.
void write_sweep_csv(const std::string& path, const std::string& key_name,
                     const std::vector<SweepRow>& rows, const Json& config);

}  // namespace alohamon::cli
