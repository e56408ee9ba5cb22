#pragma once

#include <cmath>

// Term-by-term evaluation of the rotary-wing power model exactly as
// written, with the published constants. Kept separate from the library
// implementation, which uses a cancellation-free rearrangement.
namespace oracle {

struct PowerTerms {
    double blade;
    double induced;
    double parasite;
    double total() const { return blade + induced + parasite; }
};

inline PowerTerms motion_power_terms(double v) {
    const double P0 = 84.14, P1 = 88.63, U_tip = 120.0, v0 = 4.03;
    const double d0 = 0.6, rho = 1.225, s = 0.05, A = 0.503;
    PowerTerms t;
    t.blade = P0 * (1.0 + 3.0 * v * v / (U_tip * U_tip));
    t.induced = P1 * std::pow(std::sqrt(1.0 + std::pow(v, 4) / (4.0 * std::pow(v0, 4))) -
                                  v * v / (2.0 * v0 * v0),
                              0.5);
    t.parasite = 0.5 * d0 * rho * s * A * v * v * v;
    return t;
}

}  // namespace oracle
