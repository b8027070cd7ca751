// Copyright 2026 The livecase Authors
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

#ifndef LIVECASE_DIAGNOSTICS_HPP
#define LIVECASE_DIAGNOSTICS_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace livecase {

enum class Severity { error, warning };

inline const char* to_string(Severity s) {
  return s == Severity::error ? "error" : "warning";
}

/// Half-open character range within a source document. Lines and columns are
/// 1-based; length counts characters on the same line.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// A message tied to a location in an input document (parser, journal,
/// telemetry reader).
struct Diagnostic {
  SourceSpan span;
  Severity severity = Severity::error;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::error;
  });
}

/// One structural-check result. `rule` is a stable machine-readable id
/// (e.g. "cycle", "orphan_solution"); `subject` names the element, SPI,
/// link, or hazard the finding is about.
struct Finding {
  std::string subject;
  Severity severity = Severity::error;
  std::string rule;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

/// Deterministically ordered list of findings. Empty report means the check
/// passed with nothing to say.
struct ValidationReport {
  std::vector<Finding> findings;

  void add(std::string subject, Severity sev, std::string rule, std::string message) {
    findings.push_back({std::move(subject), sev, std::move(rule), std::move(message)});
  }

  /// Canonical order: (subject, rule, message).
  void normalize() {
    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
      if (a.subject != b.subject) return a.subject < b.subject;
      if (a.rule != b.rule) return a.rule < b.rule;
      return a.message < b.message;
    });
  }

  int error_count() const {
    return static_cast<int>(std::count_if(findings.begin(), findings.end(),
        [](const Finding& f) { return f.severity == Severity::error; }));
  }
  int warning_count() const {
    return static_cast<int>(findings.size()) - error_count();
  }
  bool has_errors() const { return error_count() > 0; }
  bool empty() const { return findings.empty(); }

  bool contains_rule(const std::string& rule) const {
    return std::any_of(findings.begin(), findings.end(),
                       [&](const Finding& f) { return f.rule == rule; });
  }

  void merge(const ValidationReport& other) {
    findings.insert(findings.end(), other.findings.begin(), other.findings.end());
  }
};

/// Thrown when an operation's input violates its contract (the spec-level
/// "rejected input"). Data-level problems are reported as findings or
/// diagnostics instead.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace livecase

#endif  // LIVECASE_DIAGNOSTICS_HPP
