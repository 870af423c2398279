#include "mpvc/solve.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "mpvc/util.hpp"

namespace mpvc {

const char* status_name(Status s) {
    switch (s) {
        case Status::Valid: return "valid";
        case Status::Unknown: return "unknown";
        case Status::Refuted: return "refuted";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

std::string find_solver() {
    if (const char* env = std::getenv("MPVC_SOLVER"); env && *env) return env;
    if (std::system("command -v z3 >/dev/null 2>&1") == 0) return "z3";
    return "";
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

}  // namespace

SolveResult solve_file(const std::string& cmd, const std::string& path, double timeout_s) {
    SolveResult r;
    if (cmd.empty()) {
        r.note = "no solver configured";
        return r;
    }
    auto start = std::chrono::steady_clock::now();
    int fd[2];
    if (pipe(fd) != 0) throw Error("pipe failed");
    pid_t pid = fork();
    if (pid < 0) throw Error("fork failed");
    if (pid == 0) {
        setpgid(0, 0);
        dup2(fd[1], 1);
        dup2(fd[1], 2);
        close(fd[0]);
        close(fd[1]);
        std::string line = cmd + " " + quote(path);
        execl("/bin/sh", "sh", "-c", line.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(fd[1]);
    std::string out;
    bool timed_out = false;
    auto deadline = start + std::chrono::milliseconds(static_cast<long>(timeout_s * 1000));
    for (;;) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            timed_out = true;
            break;
        }
        pollfd p{fd[0], POLLIN, 0};
        int k = poll(&p, 1, static_cast<int>(left.count()));
        if (k == 0) {
            timed_out = true;
            break;
        }
        char buf[4096];
        ssize_t n = read(fd[0], buf, sizeof buf);
        if (n <= 0) break;
        out.append(buf, static_cast<size_t>(n));
    }
    if (timed_out) kill(-pid, SIGKILL);
    close(fd[0]);
    int st = 0;
    waitpid(pid, &st, 0);
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::string first = out.substr(0, out.find('\n'));
    while (!first.empty() && (first.back() == '\r' || first.back() == ' ')) first.pop_back();
    if (timed_out) {
        r.status = Status::Unknown;
        r.note = "timeout";
    } else if (first == "unsat") {
        r.status = Status::Valid;
    } else if (first == "sat") {
        r.status = Status::Refuted;
    } else {
        r.status = Status::Unknown;
        r.note = first.empty() ? "no output" : first;
    }
    return r;
}

SolveResult solve_text(const std::string& cmd, const std::string& smt, double timeout_s) {
    std::string tmpl = (std::getenv("TMPDIR") ? std::string(std::getenv("TMPDIR")) : "/tmp") + "/mpvc_XXXXXX.smt2";
    int fd = mkstemps(tmpl.data(), 5);
    if (fd < 0) throw Error("cannot create temporary file");
    close(fd);
    std::ofstream(tmpl) << smt;
    auto r = solve_file(cmd, tmpl, timeout_s);
    std::remove(tmpl.c_str());
    return r;
}

std::vector<SolveResult> solve_files(const std::string& cmd, const std::vector<std::string>& paths,
                                     double timeout_s, unsigned jobs) {
    std::vector<SolveResult> out(paths.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < paths.size();) out[i] = solve_file(cmd, paths[i], timeout_s);
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < std::max(1u, jobs); ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace mpvc
