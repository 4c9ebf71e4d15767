#include "collect.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "suf/error.hpp"

namespace suf::tools {
namespace {

std::atomic<int> g_signal{0};

void on_signal(int sig) { g_signal.store(sig); }

// Forks and execs argv; stderr goes to `stderr_path` when given.
pid_t spawn(const std::vector<std::string>& argv, const std::filesystem::path* stderr_path) {
  std::vector<char*> raw;
  for (const auto& a : argv) raw.push_back(const_cast<char*>(a.c_str()));
  raw.push_back(nullptr);

  int err_fd = -1;
  if (stderr_path) {
    err_fd = ::open(stderr_path->c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (err_fd < 0) {
      fail(ErrorCode::IoFailure, "cannot open " + stderr_path->string() + ": " + std::strerror(errno));
    }
  }
  const pid_t pid = ::fork();
  if (pid < 0) fail(ErrorCode::IoFailure, std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    // Own process group so terminate() reaches grandchildren too.
    ::setpgid(0, 0);
    if (err_fd >= 0) {
      ::dup2(err_fd, STDERR_FILENO);
      ::close(err_fd);
    }
    ::execvp(raw[0], raw.data());
    std::fprintf(stderr, "exec %s: %s\n", raw[0], std::strerror(errno));
    ::_exit(127);
  }
  if (err_fd >= 0) ::close(err_fd);
  ::setpgid(pid, pid);
  return pid;
}

bool exited(pid_t pid) {
  int status = 0;
  return ::waitpid(pid, &status, WNOHANG) == pid;
}

void terminate(pid_t pid, int sig) {
  if (pid <= 0) return;
  ::kill(-pid, sig);
  for (int i = 0; i < 50; ++i) {
    if (exited(pid)) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ::kill(-pid, SIGKILL);
  ::waitpid(pid, nullptr, 0);
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(sep);
    out += items[i];
  }
  return out;
}

}  // namespace

std::filesystem::path collect(const CollectOptions& options) {
  if (options.binary.empty()) fail(ErrorCode::UsageError, "collect: no workload binary given");
  if (options.events.empty()) fail(ErrorCode::UsageError, "collect: no events given");
  if (options.interval_ms <= 0) fail(ErrorCode::UsageError, "collect: interval must be > 0 ms");
  if (!(options.duration_s > 0.0)) fail(ErrorCode::UsageError, "collect: duration must be > 0 s");

  std::string name = options.name;
  if (name.empty()) name = std::filesystem::path(options.binary).filename().string();
  const auto capture = options.out_dir / ("data_" + name + ".txt");

  std::vector<std::string> workload = {options.binary};
  workload.insert(workload.end(), options.args.begin(), options.args.end());
  const std::vector<std::string> sampler = {options.perf, "stat", "-e", join(options.events, ','), "-a",
                                            "-I", std::to_string(options.interval_ms)};

  struct sigaction sa {};
  sa.sa_handler = on_signal;
  sigemptyset(&sa.sa_mask);
  struct sigaction old_int {}, old_term {};
  ::sigaction(SIGINT, &sa, &old_int);
  ::sigaction(SIGTERM, &sa, &old_term);
  g_signal.store(0);

  pid_t work_pid = -1;
  pid_t perf_pid = -1;
  bool sampler_died = false;
  auto cleanup = [&] {
    terminate(work_pid, SIGTERM);
    // perf flushes its last interval on SIGINT.
    terminate(perf_pid, SIGINT);
    ::sigaction(SIGINT, &old_int, nullptr);
    ::sigaction(SIGTERM, &old_term, nullptr);
  };

  try {
    work_pid = spawn(workload, nullptr);
    perf_pid = spawn(sampler, &capture);
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(options.duration_s);
    while (std::chrono::steady_clock::now() < deadline && g_signal.load() == 0) {
      if (work_pid > 0 && exited(work_pid)) {
        work_pid = options.respawn ? spawn(workload, nullptr) : -1;
      }
      if (perf_pid > 0 && exited(perf_pid)) {
        perf_pid = -1;
        sampler_died = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  } catch (...) {
    cleanup();
    throw;
  }
  const int sig = g_signal.load();
  cleanup();
  if (sig != 0) fail(ErrorCode::UsageError, "collect: interrupted by signal " + std::to_string(sig));
  if (sampler_died) {
    fail(ErrorCode::IoFailure, "collect: " + options.perf + " exited early, see " + capture.string());
  }
  return capture;
}

}  // namespace suf::tools
