#include "serlab/registry.hpp"

#include <cmath>
#include <stdexcept>

#include "serlab/special.hpp"
#include "serlab/sphere_oracle.hpp"

namespace serlab {

namespace {

// Derivatives in noise power from the SNR-side closed forms via snr = 1/P.
void attach_noise_side(PeModel& m) {
    auto pe = m.pe_snr;
    auto d1 = m.d1_snr;
    auto d2 = m.d2_snr;
    m.pe_noise = [pe](double p) { return pe(1.0 / p); };
    m.d1_noise = [d1](double p) { return -d1(1.0 / p) / (p * p); };
    m.d2_noise = [d1, d2](double p) {
        return d2(1.0 / p) / (p * p * p * p) + 2.0 * d1(1.0 / p) / (p * p * p);
    };
}

PeModel bpsk_model() {
    PeModel m;
    m.name = "bpsk-closed-form";
    m.n = 1;
    m.pe_snr = [](double g) { return q_func(std::sqrt(g)); };
    m.d1_snr = [](double g) {
        return -0.5 * normal_pdf(std::sqrt(g)) / std::sqrt(g);
    };
    m.d2_snr = [](double g) {
        return 0.25 * normal_pdf(std::sqrt(g)) * (1.0 + g) / (g * std::sqrt(g));
    };
    attach_noise_side(m);
    m.pc_snr = [pe = m.pe_snr](double g) { return 1.0 - pe(g); };
    m.pc_d1_snr = [d1 = m.d1_snr](double g) { return -d1(g); };
    return m;
}

PeModel qpsk_model() {
    PeModel m;
    m.name = "qpsk-closed-form";
    m.n = 2;
    // per-dimension argument x = sqrt(g/2); pe = 2Q(x) - Q(x)^2
    m.pe_snr = [](double g) {
        double q = q_func(std::sqrt(0.5 * g));
        return 2.0 * q - q * q;
    };
    m.d1_snr = [](double g) {
        double x = std::sqrt(0.5 * g);
        return -(1.0 - q_func(x)) * normal_pdf(x) / (2.0 * x);
    };
    m.d2_snr = [](double g) {
        double x = std::sqrt(0.5 * g);
        double f = normal_pdf(x);
        double q = q_func(x);
        return f / (8.0 * x * x * x) * ((1.0 - q) * (x * x + 1.0) - x * f);
    };
    attach_noise_side(m);
    m.pc_snr = [pe = m.pe_snr](double g) { return 1.0 - pe(g); };
    m.pc_d1_snr = [d1 = m.d1_snr](double g) { return -d1(g); };
    return m;
}

PeModel sphere_model(int n, double radius) {
    PeModel m;
    const auto s = make_sphere(n, radius);
    m.name = "sphere:" + std::to_string(n) + ":" + std::to_string(radius);
    m.n = n;
    m.pe_snr = [s](double g) { return 1.0 - sphere_pc(s, g); };
    m.d1_snr = [s](double g) { return -sphere_pc_d(s, g, 1); };
    m.d2_snr = [s](double g) { return -sphere_pc_d(s, g, 2); };
    m.pe_noise = [s](double p) { return 1.0 - gamma_p(0.5 * s.n, 0.5 * s.radius * s.radius / p); };
    m.d1_noise = [s](double p) { return sphere_pe_noise_d(s, p, 1); };
    m.d2_noise = [s](double p) { return sphere_pe_noise_d(s, p, 2); };
    m.pc_snr = [s](double g) { return sphere_pc(s, g); };
    m.pc_d1_snr = [s](double g) { return sphere_pc_d(s, g, 1); };
    return m;
}

}  // namespace

PeModel make_pe_model(const std::string& spec) {
    if (spec == "bpsk-closed-form") return bpsk_model();
    if (spec == "qpsk-closed-form") return qpsk_model();
    if (spec.rfind("sphere:", 0) == 0) {
        auto rest = spec.substr(7);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("pe model: expected sphere:<n>:<R>");
        int n = std::stoi(rest.substr(0, colon));
        double r = std::stod(rest.substr(colon + 1));
        return sphere_model(n, r);
    }
    throw std::invalid_argument("unknown pe model: " + spec);
}

}  // namespace serlab
