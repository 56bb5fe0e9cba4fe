#include "olla/mcs_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace olla {

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
    if (entries_.size() != kNumMcs)
        throw std::invalid_argument("mcs table must have exactly 28 entries");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].mcs_index != static_cast<int>(i))
            throw std::invalid_argument("mcs table indices must run 0..27 in order");
        if (entries_[i].slope <= 0.0)
            throw std::invalid_argument("mcs table slope must be positive");
        if (i > 0) {
            if (entries_[i].rate <= entries_[i - 1].rate)
                throw std::invalid_argument("mcs table rates must be strictly increasing");
            if (entries_[i].sinr_50pct <= entries_[i - 1].sinr_50pct)
                throw std::invalid_argument("mcs table sinr_50pct must be strictly increasing");
        }
    }
}

McsTable McsTable::built_in() {
    // Spectral efficiency ladder 0.15 -> 5.55 bits/symbol over 28 steps
    // (geometric), scaled to bits per subframe for an 8400-RE transport
    // block. Error curves are logistic, 0.9 dB apart, unit slope.
    std::vector<McsEntry> entries;
    entries.reserve(kNumMcs);
    for (int m = 0; m < kNumMcs; ++m) {
        McsEntry e;
        e.mcs_index = m;
        double efficiency = 0.15 * std::pow(5.55 / 0.15, m / 27.0);
        e.rate = std::round(8400.0 * efficiency);
        e.sinr_50pct = -6.0 + 0.9 * m;
        e.slope = 1.0;
        entries.push_back(e);
    }
    return McsTable(std::move(entries));
}

McsTable McsTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mcs table '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "mcs_index,rate,sinr_50pct,slope")
        throw std::runtime_error("mcs table '" + path + "': bad header");
    std::vector<McsEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        McsEntry e;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(row >> e.mcs_index >> c1 >> e.rate >> c2 >> e.sinr_50pct >> c3 >> e.slope) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw std::runtime_error("mcs table '" + path + "': bad row '" + line + "'");
        entries.push_back(e);
    }
    return McsTable(std::move(entries));
}

void McsTable::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mcs table '" + path + "'");
    out << "mcs_index,rate,sinr_50pct,slope\n";
    char buf[128];
    for (const McsEntry& e : entries_) {
        std::snprintf(buf, sizeof(buf), "%d,%.0f,%.2f,%.2f\n", e.mcs_index, e.rate,
                      e.sinr_50pct, e.slope);
        out << buf;
    }
}

double McsTable::bler(int mcs, double sinr_db) const {
    const McsEntry& e = entry(mcs);
    return 1.0 / (1.0 + std::exp(e.slope * (sinr_db - e.sinr_50pct)));
}

}  // namespace olla
