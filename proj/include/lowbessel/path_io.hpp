#pragma once

// CSV serialisation of sample paths. Single paths use the header
// `t,value[,dW]`, where dW on row i > 0 is the increment ending at t_i and
// row 0 leaves it empty. Ensembles are written one path per column or one
// file per path. Numbers are printed with 17 significant digits so a
// round trip is exact.

#include "lowbessel/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lowbessel {

void write_path_csv(std::ostream& os, const SamplePath& path);
SamplePath read_path_csv(std::istream& is);

void write_path_csv(const std::filesystem::path& file, const SamplePath& path);
SamplePath read_path_csv(const std::filesystem::path& file);

enum class EnsembleLayout { columns, file_per_path };

/// Columns layout: one file `t,path0,path1,...` (all paths on one grid).
/// File-per-path layout: `<stem>_<k>.csv` next to `file`.
void write_ensemble_csv(const std::filesystem::path& file, std::span<const SamplePath> paths,
                        EnsembleLayout layout = EnsembleLayout::columns);

/// Reads a columns-layout ensemble back. Noise is not stored in this layout.
std::vector<SamplePath> read_ensemble_csv(const std::filesystem::path& file);

/// "%.17g" formatting.
std::string format_double(double v);

}  // namespace lowbessel
