#include "serlab/csv.hpp"

#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace serlab {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& line : comments) out << "# " << line << "\n";
}

void write_curve_csv(std::ostream& out, const CurveEstimate& c,
                     const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << axis_name(c.axis) << "," << c.quantity << "_" << c.method << ",std_error\n";
    for (std::size_t k = 0; k < c.grid.size(); ++k)
        out << fmt_g17(c.grid[k]) << "," << fmt_g17(c.values[k]) << ","
            << fmt_g17(c.std_errors[k]) << "\n";
}

CurveEstimate read_curve_csv(std::istream& in) {
    CurveEstimate c;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            have_header = true;
            auto first = line.substr(0, line.find(','));
            c.axis = first == "noise" ? Axis::Noise : Axis::Snr;
            auto rest = line.substr(line.find(',') + 1);
            c.quantity = rest.substr(0, rest.find('_'));
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        double v[3] = {0, 0, 0};
        for (int k = 0; k < 3 && std::getline(row, cell, ','); ++k) v[k] = std::stod(cell);
        c.grid.push_back(v[0]);
        c.values.push_back(v[1]);
        c.std_errors.push_back(v[2]);
    }
    if (!have_header) throw std::runtime_error("curve csv: missing header row");
    return c;
}

void write_bound_report_csv(std::ostream& out, const BoundCheckReport& rep,
                            const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "value,estimate,std_error,lower,upper,margin,pass\n";
    for (const auto& r : rep.rows)
        out << fmt_g17(r.x) << "," << fmt_g17(r.estimate) << "," << fmt_g17(r.std_error)
            << "," << fmt_g17(r.lower) << "," << fmt_g17(r.upper) << ","
            << fmt_g17(r.margin) << "," << (r.pass ? 1 : 0) << "\n";
}

void write_strategy_csv(std::ostream& out, const SharingStrategy& s,
                        const std::vector<std::string>& comments) {
    write_comments(out, comments);
    const char* kind = s.kind == SharingKind::None               ? "none"
                       : s.kind == SharingKind::OnOffSuboptimal ? "on_off_suboptimal"
                                                                 : "tangent_optimal";
    out << "# kind=" << kind << " threshold=" << fmt_g17(s.threshold)
        << " achieved=" << fmt_g17(s.achieved_ser) << "\n";
    out << "fraction,power\n";
    for (const auto& lv : s.levels)
        out << fmt_g17(lv.fraction) << "," << fmt_g17(lv.power) << "\n";
}

void write_allocation_csv(std::ostream& out, const AllocationResult& a,
                          const std::vector<double>& stream_snrs,
                          const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "# objective=" << fmt_g17(a.objective) << " multiplier=" << fmt_g17(a.multiplier)
        << " kkt_residual=" << fmt_g17(a.kkt_residual) << "\n";
    out << "stream,snr,fraction\n";
    for (std::size_t i = 0; i < a.fractions.size(); ++i)
        out << i << "," << fmt_g17(stream_snrs[i]) << "," << fmt_g17(a.fractions[i]) << "\n";
}

}  // namespace serlab
