#pragma once

#include <string>
#include <vector>

namespace olla {

struct McsEntry {
    int mcs_index = 0;
    double rate = 0.0;        // bits delivered by one successful transmission
    double sinr_50pct = 0.0;  // dB point where the block error rate is 0.5
    double slope = 1.0;       // dB^-1 steepness of the error curve
};

// Ordered table of the 28 transmission rates. Rates and 50% points must be
// strictly increasing in the MCS index.
class McsTable {
public:
    static constexpr int kNumMcs = 28;
    static constexpr int kNumCqi = 16;

    static McsTable built_in();
    static McsTable load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    explicit McsTable(std::vector<McsEntry> entries);

    int size() const { return static_cast<int>(entries_.size()); }
    int max_mcs() const { return size() - 1; }
    const McsEntry& entry(int mcs) const { return entries_[static_cast<std::size_t>(mcs)]; }
    double rate(int mcs) const { return entry(mcs).rate; }

    // Block error rate of MCS m at the given instantaneous SINR:
    // 1 / (1 + exp(slope * (sinr - sinr_50pct))), decreasing in SINR and
    // increasing in m.
    double bler(int mcs, double sinr_db) const;

private:
    std::vector<McsEntry> entries_;
};

}  // namespace olla
