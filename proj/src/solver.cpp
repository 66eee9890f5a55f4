#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <cstring>
#include <sstream>

#include "cforge/smt.hpp"

namespace cforge {

namespace {

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

constexpr const char* kSentinel = "%%CFORGE-SYNC%%";

void ignore_sigpipe_once() {
  static bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

std::vector<std::string> split_command(const std::string& line) {
  std::vector<std::string> parts;
  std::istringstream is(line);
  std::string p;
  while (is >> p) parts.push_back(p);
  return parts;
}

namespace {

bool on_path(const std::string& name) {
  const char* path = ::getenv("PATH");
  if (!path) return false;
  std::istringstream is(path);
  std::string dir;
  while (std::getline(is, dir, ':')) {
    if (dir.empty()) continue;
    if (::access((dir + "/" + name).c_str(), X_OK) == 0) return true;
  }
  return false;
}

}  // namespace

SolverConfig default_solver_config() {
  SolverConfig cfg;
  if (const char* env = ::getenv("CONTRACT_FORGE_SOLVER")) {
    cfg.command = split_command(env);
  }
  if (cfg.command.empty()) {
    if (on_path("z3"))
      cfg.command = {"z3", "-in"};
    else if (on_path("cvc5"))
      cfg.command = {"cvc5", "--incremental", "--produce-models"};
    else
      cfg.command = {"z3", "-in"};  // error surfaces at spawn with guidance
  }
  return cfg;
}

Solver::Solver(SolverConfig config) : config_(std::move(config)) {
  if (config_.timeout_ms <= 0)
    throw SolverError("solver timeout must be positive");
  ignore_sigpipe_once();
}

Solver::~Solver() { shutdown(); }

void Solver::spawn() {
  if (config_.command.empty()) throw SolverError("empty solver command");
  int to_pipe[2];
  int from_pipe[2];
  if (::pipe(to_pipe) != 0 || ::pipe(from_pipe) != 0)
    throw SolverError("pipe() failed");
  pid_t pid = ::fork();
  if (pid < 0) throw SolverError("fork() failed");
  if (pid == 0) {
    ::dup2(to_pipe[0], STDIN_FILENO);
    ::dup2(from_pipe[1], STDOUT_FILENO);
    ::dup2(from_pipe[1], STDERR_FILENO);
    ::close(to_pipe[0]);
    ::close(to_pipe[1]);
    ::close(from_pipe[0]);
    ::close(from_pipe[1]);
    std::vector<char*> argv;
    for (const auto& a : config_.command)
      argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(to_pipe[0]);
  ::close(from_pipe[1]);
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
  ::fcntl(from_child_, F_SETFL, O_NONBLOCK);
  ::fcntl(to_child_, F_SETFL, O_NONBLOCK);
  pid_ = pid;
  used_ = false;
}

void Solver::shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(static_cast<pid_t>(pid_), SIGKILL);
    int status = 0;
    ::waitpid(static_cast<pid_t>(pid_), &status, 0);
  }
  pid_ = -1;
}

Solver::Exchange Solver::transact(const std::string& payload,
                                  long long deadline_ms) {
  Exchange ex;
  std::string to_send = payload;
  to_send += "\n(echo \"";
  to_send += kSentinel;
  to_send += "\")\n";

  size_t written = 0;
  std::string received;
  const std::string marker = kSentinel;

  while (true) {
    const long long remain = deadline_ms - now_ms();
    if (remain <= 0) {
      ex.timed_out = true;
      ex.text = std::move(received);
      return ex;
    }
    struct pollfd fds[2];
    nfds_t nfds = 0;
    int write_slot = -1;
    int read_slot = -1;
    if (written < to_send.size()) {
      fds[nfds] = {to_child_, POLLOUT, 0};
      write_slot = static_cast<int>(nfds++);
    }
    fds[nfds] = {from_child_, POLLIN, 0};
    read_slot = static_cast<int>(nfds++);

    int rc = ::poll(fds, nfds, static_cast<int>(std::min(remain, 200LL)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      ex.text = std::move(received);
      return ex;
    }
    if (write_slot >= 0 && (fds[write_slot].revents & (POLLOUT | POLLERR))) {
      ssize_t n = ::write(to_child_, to_send.data() + written,
                          to_send.size() - written);
      if (n > 0) {
        written += static_cast<size_t>(n);
      } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
        ex.text = std::move(received);
        return ex;  // broken pipe: process died
      }
    }
    if (fds[read_slot].revents & (POLLIN | POLLHUP | POLLERR)) {
      char buf[65536];
      ssize_t n = ::read(from_child_, buf, sizeof(buf));
      if (n > 0) {
        received.append(buf, static_cast<size_t>(n));
        auto at = received.find(marker);
        if (at != std::string::npos) {
          ex.ok = true;
          ex.text = received.substr(0, at);
          return ex;
        }
      } else if (n == 0) {
        ex.text = std::move(received);
        return ex;  // EOF before sentinel
      } else if (errno != EAGAIN && errno != EINTR) {
        ex.text = std::move(received);
        return ex;
      }
    }
  }
}

SolverResult Solver::check(const std::string& script,
                           const std::vector<SymbolDecl>* decls_for_model) {
  if (const char* trace = ::getenv("CFORGE_SOLVER_TRACE")) {
    std::ofstream out(trace, std::ios::app);
    out << ";; --- script ---\n" << script;
  }
  SolverResult res;
  if (pid_ < 0) {
    try {
      spawn();
    } catch (const SolverError& e) {
      res.status = SolverStatus::ProcessError;
      res.diagnostics = e.what();
      return res;
    }
  }
  const long long deadline = now_ms() + config_.timeout_ms;

  std::string payload;
  if (used_) payload += "(reset)\n";
  payload += script;
  used_ = true;

  Exchange ex = transact(payload, deadline);
  if (ex.timed_out) {
    shutdown();  // child may be wedged in a long solve
    res.status = SolverStatus::Timeout;
    res.diagnostics = "no response within timeout";
    return res;
  }
  if (!ex.ok) {
    std::string out = ex.text;
    shutdown();
    res.status = SolverStatus::ProcessError;
    res.diagnostics =
        "solver process failed (command: " + config_.command[0] +
        (out.empty() ? ")" : "); output: " + out.substr(0, 500));
    return res;
  }

  if (const char* trace = ::getenv("CFORGE_SOLVER_TRACE")) {
    std::ofstream out(trace, std::ios::app);
    out << ";; --- response ---\n" << ex.text << "\n";
  }
  // Any (error ...) reply to a well-formed script means the solver dropped
  // commands; trusting the verdict after that would be unsound.
  if (ex.text.find("(error") != std::string::npos) {
    shutdown();
    res.status = SolverStatus::ProcessError;
    res.diagnostics = "solver reported errors: " + ex.text.substr(0, 500);
    return res;
  }
  // Last sat/unsat/unknown line decides; earlier lines may be warnings.
  std::istringstream is(ex.text);
  std::string line;
  std::optional<SolverStatus> status;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line == "sat") status = SolverStatus::Sat;
    else if (line == "unsat") status = SolverStatus::Unsat;
    else if (line == "unknown") status = SolverStatus::Unknown;
  }
  if (!status) {
    shutdown();
    res.status = SolverStatus::ProcessError;
    res.diagnostics = "no verdict in solver output: " + ex.text.substr(0, 500);
    return res;
  }
  res.status = *status;

  if (res.status == SolverStatus::Sat && decls_for_model) {
    Exchange mex = transact("(get-model)", deadline);
    if (mex.timed_out) {
      shutdown();
      res.status = SolverStatus::Timeout;
      res.diagnostics = "model retrieval timed out";
      return res;
    }
    if (!mex.ok) {
      shutdown();
      res.status = SolverStatus::ProcessError;
      res.diagnostics = "model retrieval failed: " + mex.text.substr(0, 500);
      return res;
    }
    res.model = parse_model_output(mex.text, *decls_for_model);
  }
  return res;
}

SolverResult check(const SolverConfig& config, const std::string& script,
                   const std::vector<SymbolDecl>* decls_for_model) {
  Solver s(config);
  return s.check(script, decls_for_model);
}

}  // namespace cforge
