#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mecsim/mon/store.hpp"

namespace mecsim::scenario {

struct AssertionResult {
    std::string id;
    bool pass = false;
    std::optional<double> measured;
    std::string bound;
    std::string detail;
};

nlohmann::json assertion_to_json(const AssertionResult& result);
bool all_passed(const std::vector<AssertionResult>& results);

/// Session table row as carried in the run report; used by the UE2 IP
/// transition check.
struct SessionRow {
    int ue = 0;
    std::string locality;
    std::string ip;
    double established_at_s = 0;
    std::optional<double> released_at_s;
    bool active = false;
};

std::vector<SessionRow> sessions_from_report(const nlohmann::json& report);

struct CheckOptions {
    double snr_step_tol_db = 0.1;  // widen to 1.5 for noisy runs
};

/// Trajectory checks for the UPF re-selection experiment. Throws
/// MissingSeries when a required metric is absent from the dump; individual
/// assertion failures are reported, never thrown.
std::vector<AssertionResult> check_experiment1(const mon::TsdbDump& dump,
                                               const std::vector<SessionRow>* sessions);

/// Trajectory checks for the UE mobility experiment.
std::vector<AssertionResult> check_experiment2(const mon::TsdbDump& dump,
                                               const CheckOptions& options = {});

}  // namespace mecsim::scenario
