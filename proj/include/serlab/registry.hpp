#pragma once

#include <string>

#include "serlab/fading.hpp"

namespace serlab {

/// Closed-form error-rate model: smooth callables on both axes, the kind
/// of input the optimizers require (Monte Carlo noise breaks their
/// bisections). Derivatives are analytic.
struct PeModel {
    std::string name;
    int n = 0;  // constellation dimensionality, for bound comparisons
    ScalarFn pe_snr, d1_snr, d2_snr;
    ScalarFn pe_noise, d1_noise, d2_noise;
    ScalarFn pc_snr, pc_d1_snr;
};

/// Registry names: "bpsk-closed-form", "qpsk-closed-form", "sphere:<n>:<R>".
PeModel make_pe_model(const std::string& spec);

}  // namespace serlab
