#pragma once

#include <filesystem>

#include "chordtm/posterior.hpp"

namespace chordtm {

// Posterior CSV: "# frame_rate=<Hz>" metadata line, header "frame,p0,...,p24",
// then one row per frame with 17 significant digits, so write/read
// round-trips are exact to 1e-9 and beyond. Reading rejects files whose rows
// sum outside 1 +- 1e-4 (reporting the row) or whose column count is wrong.
void write_posterior_csv(const std::filesystem::path& path,
                         const PosteriorMatrix& posteriors);

PosteriorMatrix read_posterior_csv(const std::filesystem::path& path);

}  // namespace chordtm
