// Copyright 2026 The defect-forge authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dforge {

/// Errors raised while reading the `.qc` text format. `line`/`column` are
/// 1-based source positions when thrown by the parser; bare validate calls
/// on in-memory circuits report the op index as the line.
struct ParseError : std::runtime_error {
  enum class Kind {
    SyntaxError,
    UnknownQubit,
    DuplicateQubit,
    UseAfterMeasure,
    UseBeforeInit,
    ControllerNotMeasured,
  };

  ParseError(Kind k, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        kind(k),
        line(line),
        column(column),
        detail(what) {}

  Kind kind;
  std::size_t line;
  std::size_t column;
  std::string detail;  // message without the position prefix
};

/// Errors raised by the state-vector oracle.
struct OracleError : std::runtime_error {
  enum class Kind {
    UnknownQubit,
    DimensionMismatch,
    CapacityExceeded,
    ZeroProbabilityOnly,
  };

  OracleError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Errors raised by the ICM expansion and wire scheduling passes.
struct CompileError : std::runtime_error {
  enum class Kind {
    UnsupportedAngle,
    QubitNotLive,
    NotIcm,
    NotNormalized,
    OverlapViolation,
  };

  CompileError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Errors raised by assembly geometry construction.
struct GeometryError : std::runtime_error {
  enum class Kind {
    RailNotLive,
    MissingBoxOutput,
    EmptyAssembly,
    BadDocument,
  };

  GeometryError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Errors raised by the distillation planner.
struct PlanError : std::runtime_error {
  enum class Kind {
    TargetUnreachable,
    InsufficientSuccesses,
  };

  PlanError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

}  // namespace dforge
