// Copyright 2026 The regdisp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REGDISP_ERROR_H_
#define REGDISP_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace regdisp {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  explicit InvalidConfig(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Assembler failures. Line and column are 1-based; column points at the
// offending token.
class AsmError : public Error {
 public:
  enum class Kind { kSyntax, kUnknownMnemonic, kUndefinedLabel, kBadRegister };

  AsmError(Kind kind, int line, int col, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  Kind kind_;
  int line_;
  int col_;
};

class MemoryError : public Error {
 public:
  enum class Kind { kUnalignedCrossLine, kOutOfRange, kMisaligned, kBadImage };

  MemoryError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class VrfError : public Error {
 public:
  enum class Kind { kV0HasNoSpillSlot, kCapacityViolation, kStaleIndex };

  VrfError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SimError : public Error {
 public:
  enum class Kind {
    kInvalidPc,
    kDecodeFault,
    kCycleLimitExceeded,
    kDataOverlapsSpill
  };

  SimError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class KernelError : public Error {
 public:
  enum class Kind { kBadDims, kUnknownKernel };

  KernelError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace regdisp

#endif  // REGDISP_ERROR_H_
