#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "serlab/bounds.hpp"
#include "serlab/optimize.hpp"
#include "serlab/ser_engine.hpp"

namespace serlab {

/// 17 significant digits, enough to round-trip a double exactly.
std::string fmt_g17(double v);

/// '#'-prefixed comment lines followed by the data block.
void write_comments(std::ostream& out, const std::vector<std::string>& comments);

/// Columns: axis value, estimate, std error. The header row carries the
/// quantity and method labels.
void write_curve_csv(std::ostream& out, const CurveEstimate& c,
                     const std::vector<std::string>& comments = {});
CurveEstimate read_curve_csv(std::istream& in);

/// One row per grid point: value, estimate, lower, upper, margin, pass.
void write_bound_report_csv(std::ostream& out, const BoundCheckReport& rep,
                            const std::vector<std::string>& comments = {});

void write_strategy_csv(std::ostream& out, const SharingStrategy& s,
                        const std::vector<std::string>& comments = {});

void write_allocation_csv(std::ostream& out, const AllocationResult& a,
                          const std::vector<double>& stream_snrs,
                          const std::vector<std::string>& comments = {});

}  // namespace serlab
