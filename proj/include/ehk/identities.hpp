#pragma once

// Randomized identity families shared by the CLI `identities` subcommand and
// the acceptance suite. Every family returns its worst relative residual
// over the requested number of samples.

#include <cstdint>
#include <functional>

#include "ehk/report.hpp"
#include "ehk/sampling.hpp"

namespace ehk {

struct IdentityFamily {
    std::string name;
    std::string ref;
    double tolerance;
    std::function<double(Sampler&, int)> run;  // worst residual over samples
};

const std::vector<IdentityFamily>& identity_families();

// run every family with a per-family RNG derived from `seed`
std::vector<Check> run_identities(std::uint64_t seed, int samples);

}  // namespace ehk
