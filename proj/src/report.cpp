#include "taglab/report.hpp"

#include <sstream>

namespace taglab {

void VerificationReport::add_param(const std::string& key, const std::string& value) {
    params_.emplace_back(key, value);
}

void VerificationReport::add_param(const std::string& key, long long value) {
    params_.emplace_back(key, std::to_string(value));
}

void VerificationReport::add_case(const std::string& id, bool pass, const std::string& detail) {
    cases_.push_back({id, pass ? 0 : 1, detail});
    (pass ? pass_count_ : fail_count_)++;
}

void VerificationReport::skip_case(const std::string& id, const std::string& detail) {
    cases_.push_back({id, 2, detail});
    ++skip_count_;
}

void VerificationReport::add_case(const std::string& id, const ValidationReport& validation) {
    if (validation.ok()) {
        add_case(id, true);
        return;
    }
    std::string detail;
    for (const auto& item : validation.items)
        if (item.status == ValidationItem::Status::fail) {
            if (!detail.empty()) detail += "; ";
            detail += item.check;
            if (!item.detail.empty()) detail += " (" + item.detail + ")";
        }
    add_case(id, false, detail);
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "suite: " << suite_ << "\n";
    for (const auto& [k, v] : params_) os << "param: " << k << " = " << v << "\n";
    for (const auto& c : cases_) {
        os << "case " << c.id << ": "
           << (c.status == 0 ? "PASS" : c.status == 1 ? "FAIL" : "SKIP");
        if (!c.detail.empty()) os << " " << c.detail;
        os << "\n";
    }
    os << "summary: total=" << total() << " pass=" << pass_count_ << " fail=" << fail_count_
       << " skip=" << skip_count_ << "\n";
    return os.str();
}

}  // namespace taglab
