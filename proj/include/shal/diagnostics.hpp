#pragma once

#include <string>
#include <vector>

#include "shal/oracle.hpp"
#include "shal/refine.hpp"

namespace shal {

struct McEstimate {
    double mean;
    double stderr;
    int n;
};

/// P(sign<w,x> != sign<u,x>) by Monte Carlo.
McEstimate disagreement(const Vector& w, const Vector& u, UnlabeledDistribution& dist,
                        int n);

/// err(h_w) - err(h_u) by paired evaluation on shared samples.
McEstimate excess_error(const Vector& w, const GroundTruth& truth, NoiseModel& noise,
                        UnlabeledDistribution& dist, int n);

struct LemmaCheck {
    std::string name;
    bool statistical;  // deterministic checks get zero tolerance beyond eps
    int n;
    int violations;
    double worst_margin;  // most negative slack observed (>= 0 means clean pass)
    bool passed;
};

struct LemmaPanelReport {
    std::uint64_t seed;
    std::vector<LemmaCheck> checks;
    bool all_passed() const;
    std::string render() const;  // deterministic byte-stable text
};

struct PanelSizes {
    int deterministic_n = 100000;  // instances per deterministic lemma
    int statistical_n = 100000;    // Monte Carlo sample size per statistical check
    std::size_t dim = 20;
    std::size_t sparsity = 5;
};

/// Runs the deterministic inequality panel and the statistical panel and
/// reports pass/fail with margins per lemma.
LemmaPanelReport check_lemma_panel(std::uint64_t seed, const PanelSizes& sizes = {});

}  // namespace shal
