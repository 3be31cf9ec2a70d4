#pragma once

#include <string>
#include <vector>

#include "etcb/arms.hpp"
#include "etcb/harness.hpp"

namespace etcb::presets {

// Built-in two-arm models used by the bundled experiment presets (fig1..fig7)
// and the test suites. Supports are [0, 10] unless noted.

// Tight Gaussian (mean 3) vs. a 3:2 bimodal mixture at 1 and 8 (mean 3.8): the
// lower-mean arm wins a simultaneous draw ~60% of the time.
BanditModel tight_vs_bimodal();

// Two unit-scale Gaussians at 2 and 1: a benign model where mean-seeking and
// win-probability-seeking agree.
BanditModel overlapping_gaussians();

// Wide Gaussian (mean 6, nominal variance 4) vs. tight Gaussian (mean 3,
// nominal variance 0.5): the high-variance arm is the right commit.
BanditModel high_variance_winner();

// Wide Gaussian (mean 3, nominal variance 2) vs. the bimodal arm of
// tight_vs_bimodal: near-even win probabilities with unequal tails.
BanditModel wide_vs_bimodal();

// Disjoint supports: ~(mean 10, var 10) on [4, 16] vs. ~(mean 1, var 1) on
// [-2, 4]; the first arm wins every draw, yet has the worse mean-variance
// score for small risk tolerance.
BanditModel separated_two_scale();

// Uniform[shift, 1 + shift] vs. Uniform[0, 1]. shift = 1 - sqrt(0.8) puts the
// first arm's win probability at exactly 0.6 (gap 0.2).
BanditModel shifted_uniform_pair(double shift);
double shift_for_win_probability_06();

// Near-deterministic rewards at the given levels (tiny uniform supports).
BanditModel deterministic_levels(const std::vector<double>& levels);

// Policy set used by the comparison presets (fig1/fig2/fig3) and the
// acceptance gate: both single-round commit variants, the index baseline, and
// the two scored baselines at three hyper choices each (see README).
std::vector<PolicySpec> comparison_policies();

// Run one bundled preset ("fig1".."fig7") and write its CSV file(s) under
// out_dir. replications applies to the Monte Carlo presets (fig1..fig5);
// threads (0 = auto) is passed through to the harness. Returns the files
// written.
std::vector<std::string> run_preset(const std::string& tag, const std::string& out_dir,
                                    std::uint64_t replications, int threads = 0);

const std::vector<std::string>& preset_tags();

}  // namespace etcb::presets
