// report.hpp
//
// Structured pass/fail reports for the verification suites: deterministic
// text output given the same command and seed, nonzero exit iff any case
// failed.

#pragma once

#include <string>
#include <vector>

#include "taglab/tagged.hpp"

namespace taglab {

class VerificationReport {
public:
    explicit VerificationReport(std::string suite) : suite_(std::move(suite)) {}

    void add_param(const std::string& key, const std::string& value);
    void add_param(const std::string& key, long long value);
    void add_case(const std::string& id, bool pass, const std::string& detail = "");
    void skip_case(const std::string& id, const std::string& detail);
    /// Folds a validation report into one case.
    void add_case(const std::string& id, const ValidationReport& validation);

    bool ok() const { return fail_count_ == 0; }
    int pass_count() const { return pass_count_; }
    int fail_count() const { return fail_count_; }
    int skip_count() const { return skip_count_; }
    int total() const { return pass_count_ + fail_count_ + skip_count_; }
    int exit_code() const { return ok() ? 0 : 1; }
    const std::string& suite() const { return suite_; }

    std::string to_text() const;

private:
    struct Case {
        std::string id;
        int status;  // 0 pass, 1 fail, 2 skip
        std::string detail;
    };
    std::string suite_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<Case> cases_;
    int pass_count_ = 0, fail_count_ = 0, skip_count_ = 0;
};

}  // namespace taglab
