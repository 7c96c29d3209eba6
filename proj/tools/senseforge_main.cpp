// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <stop_token>
#include <thread>

#include "senseforge/cli.hpp"

namespace {

std::atomic<bool> interrupted{false};

extern "C" void on_interrupt(int) {
  interrupted.store(true);
  std::signal(SIGINT, SIG_DFL);  // a second ^C kills immediately
}

}  // namespace

int main(int argc, char** argv) {
  std::stop_source stop;
  std::signal(SIGINT, on_interrupt);
  std::jthread watcher([&stop](std::stop_token done) {
    while (!done.stop_requested()) {
      if (interrupted.load()) {
        stop.request_stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  const std::vector<std::string> args(argv + 1, argv + argc);
  return senseforge::dispatch(args, std::cout, std::cerr, stop.get_token());
}
