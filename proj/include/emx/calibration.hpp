#pragma once

#include "emx/analysis.hpp"

namespace emx {

// Frozen calibration of the unspecified-constant lemmas. These estimates
// come with no usable explicit constants, so the suite checks that the
// sampled ratios are reproducible, not that they meet theoretical values.
// Procedure, reproducible from scratch:
//
//   grid 24^3, L = 2*pi, envelopes |xi|^{-a}, a in {0,1,2} cycled,
//   300 samples per seed, seeds 7..11, per-lemma default parameters below;
//   frozen value = mean over the five per-seed maxima of LHS/RHS.
//
// cmd_verify and the acceptance suite re-run the same law and require each
// per-seed max to sit within +-5% of the frozen value.

struct CalibrationEntry {
    Lemma lemma;
    double frozen_max;
};

inline constexpr int calibration_samples_per_seed = 300;
inline constexpr std::uint64_t calibration_seeds[] = {7, 8, 9, 10, 11};
inline constexpr double calibration_drift_tol = 0.05;

inline LemmaParams default_lemma_params(Lemma l) {
    LemmaParams p; // interp defaults: ell = 1, s = 0.5
    switch (l) {
    case Lemma::interp_hs:
    case Lemma::interp_besov: break;
    case Lemma::gn: break; // alpha=1, m=0, l=2, p=2
    case Lemma::commutator:
    case Lemma::composition: p.k = 2; break;
    case Lemma::riesz: p.s = 0.5; break;   // p = 3/2
    case Lemma::lp_besov: p.s = 1.5; break; // endpoint p = 1
    }
    return p;
}

// Values measured with the procedure above; regenerate with
// `emx verify <suite> --print-calibration` and paste the means here.
inline constexpr CalibrationEntry calibration_table[] = {
    {Lemma::gn, 0.946766},      {Lemma::commutator, 0.278956},
    {Lemma::riesz, 0.394765},   {Lemma::lp_besov, 0.066332},
    {Lemma::composition, 1.140731}};

inline const CalibrationEntry* calibration_for(Lemma l) {
    for (const CalibrationEntry& e : calibration_table)
        if (e.lemma == l) return &e;
    return nullptr;
}

} // namespace emx
