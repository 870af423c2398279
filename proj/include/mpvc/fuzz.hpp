#pragma once

#include <string>
#include <vector>

#include "mpvc/mme.hpp"

namespace mpvc {

// Random well-typed program over scalars, arrays, records and one or two pointer levels.
// Every cell is initialized before the random part, and indices stay in bounds.
std::string random_program(SplitMix64& rng, int statements = 12);

struct FuzzOptions {
    int count = 100;
    uint64_t seed = 1;
    std::vector<Model> models = {Model::Typed, Model::B, Model::BTop, Model::C, Model::P};
    unsigned ilvl = kDefaultIlvl;
    int traces = 2;
    bool prune = true;
};

struct FuzzReport {
    int programs = 0;
    int runs = 0;  // (program, model) pairs
    std::vector<std::string> violations;
    std::string reproducer;  // source of the first failing program
};

// Checks points-to soundness, the PA laws and translation validation on each program.
FuzzReport fuzz(const FuzzOptions& o);

// Violations of one program under one model; an empty result means it passed.
std::vector<std::string> check_program(const Program& p, const MemoryModel& mm, uint64_t seed, int traces);

}  // namespace mpvc
