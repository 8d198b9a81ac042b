#pragma once

#include <string>

#include "nlab/asymptotics.hpp"
#include "nlab/solver.hpp"
#include "nlab/verification.hpp"

namespace nlab {

std::string to_json(const LayerConstants& lc);
std::string to_json(const BoundaryPrediction& bp);
std::string to_json(const SolutionProfile& profile);
std::string to_json(const VerificationReport& report);
std::string to_json(const ConcentrationTable& table);

std::string to_csv(const SolutionProfile& profile);
std::string to_csv(const VerificationReport& report);
std::string to_csv(const ConcentrationTable& table);

/// Writes to a temp file in the target directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace nlab
