// Copyright 2026 The kgalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGALIGN_ERROR_HPP
#define KGALIGN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace kgalign {

/// Base class of every failure raised by the library. Each subclass maps to
/// one CLI exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const noexcept { return 1; }
};

/// Invalid configuration or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Unreadable, malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Non-finite loss or other numerical breakdown during training.
class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// A failure of one pipeline stage. Keeps the exit code of its cause.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(stage + ": " + cause.what()), stage_(std::move(stage)), code_(cause.exit_code()) {}
  int exit_code() const noexcept override { return code_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
  int code_;
};

}  // namespace kgalign

#endif  // KGALIGN_ERROR_HPP
