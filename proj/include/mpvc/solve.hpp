#pragma once

#include <string>
#include <vector>

namespace mpvc {

enum class Status { Valid, Unknown, Refuted, Skipped };
const char* status_name(Status s);

struct SolveResult {
    Status status = Status::Skipped;
    double millis = 0;
    std::string note;
};

// Solver command from MPVC_SOLVER, else z3 when on PATH, else empty.
std::string find_solver();

// Runs `cmd path` through the shell; unsat means the VC is valid, sat refutes it.
SolveResult solve_file(const std::string& cmd, const std::string& path, double timeout_s);
SolveResult solve_text(const std::string& cmd, const std::string& smt, double timeout_s);
std::vector<SolveResult> solve_files(const std::string& cmd, const std::vector<std::string>& paths,
                                     double timeout_s, unsigned jobs);

}  // namespace mpvc
