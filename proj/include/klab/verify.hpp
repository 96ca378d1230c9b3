#pragma once

#include <string>
#include <vector>

#include "klab/pipeline.hpp"

namespace klab {

enum class VerifyStatus { Pass, Fail, Skipped };

struct VerifyEntry {
    std::string name;
    VerifyStatus status = VerifyStatus::Pass;
    double margin = 0;     // measured slack: >= 0 means within tolerance
    double tolerance = 0;
    std::string reason;    // skip justification or failure detail
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    bool ok() const {
        for (const auto& e : entries)
            if (e.status == VerifyStatus::Fail) return false;
        return true;
    }
};

// Runs the scenario pipeline and checks every module invariant applicable to
// it. When out_dir holds a previous run of the same config, residual checks
// re-read the field dumps from disk (so tampered dumps fail).
VerifyReport run_verify(const ScenarioConfig& c, const std::string& out_dir = "");

nlohmann::json verify_to_json(const VerifyReport& rep);

}  // namespace klab
