#pragma once

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "glmb/association.hpp"
#include "glmb/filter.hpp"
#include "glmb/samplers.hpp"
#include "glmb/scenario.hpp"

namespace glmb::io {

// %.17g: shortest form that still round-trips a double exactly.
std::string format_double(double x);

// Text format: first line "P M", then P lines of M+2 space-separated positive
// decimals, columns ordered j = -1, 0, 1, ..., M.
CostMatrix read_cost_matrix(std::istream& in);
void write_cost_matrix(std::ostream& out, const CostMatrix& eta);

// CSV layouts. All files carry a header row, use '.' decimals and 1-based scans.
void write_truth_csv(std::ostream& out, const ScenarioTruth& truth);
void write_measurements_csv(std::ostream& out, const std::vector<MeasurementFrame>& frames);

// Rebuilds frames 1..max(duration, highest scan in the file); scans without
// rows come back empty, which is why the duration matters.
std::vector<MeasurementFrame> read_measurements_csv(std::istream& in, int duration = 0);

void write_estimates_csv(std::ostream& out, const FilterResult& result);
void write_diagnostics_csv(std::ostream& out, const std::vector<ScanDiagnostics>& diagnostics);

// One row per iterate: iter, semicolon-joined map entries, joint log weight,
// plus the importance column when the batch carries importance weights.
void write_samples_csv(std::ostream& out, const SampleBatch& batch, const CostMatrix& eta);

std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace glmb::io
