// Acceptance runner: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "taglab/suites.hpp"

using namespace taglab;

namespace {

struct Criterion {
    std::string name;
    std::function<VerificationReport()> run;
    double time_limit_seconds;  // 0 = unlimited
};

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"amalgamation closure (1000 random problems)",
         [] { return suite_amalgam_closure(20240901, 1000, 8); }, 60.0},
        {"strong amalgamation (200 problems, admissible E* accepted, others rejected)",
         [] { return suite_strong_amalgamation(20240902, 200, 10); }, 0.0},
        {"finite class growth (bound-1 chains, k in {5,10,20})",
         [] { return suite_chain_classes({5, 10, 20}); }, 0.0},
        {"back-and-forth closure (100 extension cases)",
         [] { return suite_lifting_closure(20240904, 100); }, 0.0},
        {"engine claim 1 (n<=4, m0<=2, m1<=2; both solver routes)",
         [] { return suite_engine_claim1(4, 2); }, 0.0},
        {"engine claim 2 (exhaustive liftings, n<=4)",
         [] { return suite_engine_claim2(4, 2); }, 0.0},
        {"reduction iff (11 graphs on 4 vertices, 121 ordered pairs)",
         [] { return suite_reduction_iff(4); }, 60.0},
        {"encode/decode round-trip (catalogs to 5 vertices, three parameter choices)",
         [] { return suite_roundtrip(5); }, 0.0},
        {"equivariance (transported codes decode to mapped graphs)",
         [] { return suite_equivariance(4); }, 0.0},
        {"serialization round-trip (500 values per type, byte-exact)",
         [] { return suite_serialization(20240910, 500); }, 0.0},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        VerificationReport report = criteria[i].run();
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = report.ok();
        if (criteria[i].time_limit_seconds > 0 && seconds > criteria[i].time_limit_seconds)
            pass = false;
        if (!pass) ++failed;
        std::printf("[%2zu/10] %s %s: %d/%d cases pass (%.1fs)\n", i + 1,
                    pass ? "PASS" : "FAIL", criteria[i].name.c_str(), report.pass_count(),
                    report.total(), seconds);
        if (!report.ok()) {
            std::string text = report.to_text();
            std::size_t shown = 0;
            std::size_t pos = 0;
            while (shown < 10 && pos < text.size()) {
                std::size_t end = text.find('\n', pos);
                std::string line = text.substr(pos, end - pos);
                if (line.find("FAIL") != std::string::npos) {
                    std::printf("        %s\n", line.c_str());
                    ++shown;
                }
                pos = end == std::string::npos ? text.size() : end + 1;
            }
        }
    }
    std::printf("RESULT: %s (%zu/10 criteria)\n", failed == 0 ? "PASS" : "FAIL",
                criteria.size() - static_cast<std::size_t>(failed));
    return failed == 0 ? 0 : 1;
}
