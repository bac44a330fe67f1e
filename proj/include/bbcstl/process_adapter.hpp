// Copyright 2026 The bbcstl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "bbcstl/error.hpp"
#include "bbcstl/formula.hpp"
#include "bbcstl/sul.hpp"

namespace bbcstl {

/// Drives a child process over the line protocol
///
///   -> RESET           <- OK
///   -> STEP x1 ... xn  <- Y y1 ... ym
///
/// with values in declared variable order. Not parallel capable and not
/// resumable: the cache replays prefixes from reset.
class ProcessAdapter : public SystemAdapter {
 public:
  ProcessAdapter(std::vector<std::string> command, std::vector<std::string> inputs,
                 std::vector<std::string> outputs,
                 std::chrono::milliseconds timeout = std::chrono::seconds(30))
      : command_(std::move(command)),
        inputs_(std::move(inputs)),
        outputs_(std::move(outputs)),
        timeout_(timeout) {
    if (command_.empty()) throw ConfigError("external system command is empty");
    start();
  }

  ProcessAdapter(const ProcessAdapter&) = delete;
  ProcessAdapter& operator=(const ProcessAdapter&) = delete;

  ~ProcessAdapter() override { stop(); }

  void reset() override {
    send("RESET\n");
    std::string line = receive();
    if (line != "OK") throw AdapterError("protocol error: expected OK after RESET, got '" + line + "'");
  }

  Valuation step(const Valuation& input) override {
    if (input.size() != inputs_.size()) throw AdapterError("wrong number of inputs");
    std::string msg = "STEP";
    for (double x : input) msg += " " + format_number(x);
    msg += "\n";
    send(msg);
    return parse_reply(receive());
  }

  const std::vector<std::string>& input_variables() const override { return inputs_; }
  const std::vector<std::string>& output_variables() const override { return outputs_; }

 private:
  void start() {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw AdapterError(std::string("pipe: ") + std::strerror(errno));
    }
    pid_ = fork();
    if (pid_ < 0) throw AdapterError(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> argv;
      for (auto& s : command_) argv.push_back(s.data());
      argv.push_back(nullptr);
      execvp(argv[0], argv.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    signal(SIGPIPE, SIG_IGN);
  }

  void stop() {
    if (write_fd_ >= 0) close(write_fd_);
    if (read_fd_ >= 0) close(read_fd_);
    write_fd_ = read_fd_ = -1;
    if (pid_ > 0) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == 0) {
        kill(pid_, SIGTERM);
        waitpid(pid_, &status, 0);
      }
      pid_ = -1;
    }
  }

  void send(const std::string& msg) {
    std::size_t off = 0;
    while (off < msg.size()) {
      ssize_t n = ::write(write_fd_, msg.data() + off, msg.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterError("system process is gone (write failed: " + std::string(std::strerror(errno)) + ")");
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string receive() {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw AdapterError("timed out waiting for the system process");
      pollfd pfd{read_fd_, POLLIN, 0};
      int rc = poll(&pfd, 1, static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw AdapterError(std::string("poll: ") + std::strerror(errno));
      }
      if (rc == 0) continue;
      char chunk[4096];
      ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterError(std::string("read: ") + std::strerror(errno));
      }
      if (n == 0) throw AdapterError("system process exited");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  Valuation parse_reply(const std::string& line) const {
    std::istringstream in(line);
    std::string tag;
    in >> tag;
    if (tag != "Y") throw AdapterError("protocol error: expected 'Y ...', got '" + line + "'");
    Valuation out;
    std::string tok;
    while (in >> tok) {
      double v = 0.0;
      auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || end != tok.data() + tok.size()) {
        throw AdapterError("malformed number '" + tok + "' in reply");
      }
      out.push_back(v);
    }
    if (out.size() != outputs_.size()) {
      throw AdapterError("reply has " + std::to_string(out.size()) + " values, expected " +
                         std::to_string(outputs_.size()));
    }
    return out;
  }

  std::vector<std::string> command_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::string buffer_;
};

}  // namespace bbcstl
