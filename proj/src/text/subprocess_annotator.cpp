#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "narrascope/error.hpp"
#include "narrascope/text/annotator.hpp"
#include "narrascope/text/tokenize.hpp"

extern char** environ;

namespace narrascope::text {
namespace {

[[noreturn]] void tagger_failure(const std::string& what) {
  throw Error(ErrorKind::kTaggerFailure, what);
}

}  // namespace

// The child's stdin and stdout are one end of a socketpair, so writes to a
// dead child fail with EPIPE instead of raising SIGPIPE (MSG_NOSIGNAL).
struct SubprocessAnnotator::Process {
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;

  ~Process() {
    if (fd >= 0) ::close(fd);
    if (pid > 0) {
      ::kill(pid, SIGTERM);
      int status = 0;
      ::waitpid(pid, &status, 0);
    }
  }

  static std::unique_ptr<Process> spawn(const std::vector<std::string>& argv) {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
      tagger_failure(std::string("socketpair: ") + std::strerror(errno));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);

    std::vector<char*> args;
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    auto proc = std::make_unique<Process>();
    const int rc = ::posix_spawnp(&proc->pid, args[0], &actions, nullptr,
                                  args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(sv[1]);
    proc->fd = sv[0];
    if (rc != 0) {
      proc->pid = -1;
      tagger_failure("cannot start tagger '" + argv[0] + "': " +
                     std::strerror(rc));
    }
    return proc;
  }

  void send_line(const std::string& line) {
    std::string_view data = line;
    while (!data.empty()) {
      const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        tagger_failure(std::string("tagger write failed: ") +
                       std::strerror(errno));
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
  }

  std::string read_line(int timeout_ms) {
    for (;;) {
      const std::size_t eol = buffer.find('\n');
      if (eol != std::string::npos) {
        std::string line = buffer.substr(0, eol);
        buffer.erase(0, eol + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      pollfd p{fd, POLLIN, 0};
      const int ready = ::poll(&p, 1, timeout_ms);
      if (ready == 0) tagger_failure("tagger timed out");
      if (ready < 0) {
        if (errno == EINTR) continue;
        tagger_failure(std::string("poll: ") + std::strerror(errno));
      }
      char chunk[4096];
      const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
      if (n == 0) tagger_failure("tagger exited");
      if (n < 0) {
        if (errno == EINTR) continue;
        tagger_failure(std::string("tagger read failed: ") +
                       std::strerror(errno));
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

SubprocessAnnotator::SubprocessAnnotator(std::vector<std::string> argv,
                                         int timeout_ms)
    : argv_(std::move(argv)), timeout_ms_(timeout_ms) {
  if (argv_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "tagger command is empty");
  }
}

SubprocessAnnotator::~SubprocessAnnotator() = default;

std::string SubprocessAnnotator::name() const {
  return "subprocess:" + argv_.front();
}

std::vector<AnnotatedToken> SubprocessAnnotator::tag(
    std::span<const std::string> tokens) const {
  std::lock_guard lock(mu_);
  try {
    if (!process_) process_ = Process::spawn(argv_);
    std::vector<AnnotatedToken> out;
    out.reserve(tokens.size());
    for (const std::string& token : tokens) {
      if (token.find('\n') != std::string::npos) {
        tagger_failure("token contains a newline");
      }
      process_->send_line(token + "\n");
      const std::string reply = process_->read_line(timeout_ms_);
      const std::size_t tab = reply.find('\t');
      if (tab == std::string::npos) {
        tagger_failure("malformed tagger reply '" + reply + "'");
      }
      const std::string tag_name = reply.substr(0, tab);
      std::string lemma = case_fold(reply.substr(tab + 1));
      if (lemma.find_first_of(" \t") != std::string::npos) {
        tagger_failure("tagger lemma contains whitespace: '" + lemma + "'");
      }
      if (lemma.empty()) lemma = case_fold(token);
      out.push_back({token, parse_pos(tag_name).value_or(Pos::kOther),
                     std::move(lemma)});
    }
    return out;
  } catch (const Error&) {
    process_.reset();
    throw;
  }
}

}  // namespace narrascope::text
