#pragma once

#include <array>
#include <cstdint>

namespace mecsim::ran {

/// Derived link quality for one UE at one tick.
struct RadioLinkState {
    double snr_db = 0;
    int cqi = 0;       // 0..15
    int mcs = 0;       // 0..28
    double capacity_bps = 0;
};

/// SNR-to-CQI reporting thresholds, spectral efficiencies and the CQI-to-MCS
/// map. Index 0 is the out-of-range entry (no transmission); thresholds[i-1]
/// is the minimum SNR for CQI i.
struct LinkTables {
    std::array<double, 15> cqi_threshold_db{-6.7, -4.7, -2.3, 0.2,  2.4,  4.3,  5.9, 8.1,
                                            10.3, 11.7, 14.1, 16.3, 18.7, 21.0, 22.7};
    std::array<double, 16> efficiency_bps_hz{0.0,    0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                             1.1758, 1.4766, 1.9141, 2.4063, 2.7305, 3.3223,
                                             3.9023, 4.5234, 5.1152, 5.5547};
    std::array<int, 16> cqi_to_mcs{0, 0, 2, 4, 6, 8, 11, 13, 15, 18, 20, 22, 24, 26, 27, 28};
};

inline int cqi_for_snr(const LinkTables& tables, double snr_db) {
    int cqi = 0;
    for (std::size_t i = 0; i < tables.cqi_threshold_db.size(); ++i) {
        if (snr_db >= tables.cqi_threshold_db[i]) {
            cqi = static_cast<int>(i) + 1;
        }
    }
    return cqi;
}

inline RadioLinkState link_state_for_snr(const LinkTables& tables, double snr_db,
                                         double bandwidth_hz, double overhead_factor) {
    RadioLinkState state;
    state.snr_db = snr_db;
    state.cqi = cqi_for_snr(tables, snr_db);
    state.mcs = tables.cqi_to_mcs[static_cast<std::size_t>(state.cqi)];
    state.capacity_bps =
        tables.efficiency_bps_hz[static_cast<std::size_t>(state.cqi)] * bandwidth_hz * overhead_factor;
    return state;
}

}  // namespace mecsim::ran
