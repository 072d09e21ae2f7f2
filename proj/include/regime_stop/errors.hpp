#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regime_stop {

/// Error with a stable machine-readable code alongside the human message.
/// The CLI prints `error: <code>: <message>` on one line and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// One violated invariant found during parameter validation.
struct ValidationIssue {
    std::string code;     ///< e.g. "A1Violation", "DegenerateSigma"
    std::string message;  ///< human-readable detail with the offending values
};

/// Carries every violation found in one validation pass, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues)
        : Error(issues.empty() ? "ValidationError" : issues.front().code,
                join(issues)),
          issues_(std::move(issues)) {}

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<ValidationIssue>& issues) {
        std::string out;
        for (const auto& issue : issues) {
            if (!out.empty()) out += "; ";
            out += issue.code + ": " + issue.message;
        }
        return out;
    }

    std::vector<ValidationIssue> issues_;
};

}  // namespace regime_stop
