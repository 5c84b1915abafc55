#pragma once

#include "tplcnn/errors.hpp"
#include "tplcnn/network.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tplcnn {

/// events.csv: header `cycle,time,row,col`, time in RC units with 9
/// decimal digits (fixed precision keeps reproducibility checks byte
/// exact).
inline void write_event_csv(const std::string& path, const std::vector<NetworkEvent>& events)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "cycle,time,row,col\n";
    char buf[64];
    for (const NetworkEvent& e : events) {
        std::snprintf(buf, sizeof(buf), "%.9f", e.time);
        out << e.cycle << ',' << buf << ',' << e.row << ',' << e.col << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<NetworkEvent> read_event_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "cycle,time,row,col") {
        throw IoError("bad events.csv header: " + path);
    }
    std::vector<NetworkEvent> events;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        NetworkEvent e;
        char comma;
        std::istringstream ss(line);
        if (!(ss >> e.cycle >> comma >> e.time >> comma >> e.row >> comma >> e.col)) {
            throw IoError("bad events.csv row: " + line);
        }
        events.push_back(e);
    }
    return events;
}

} // namespace tplcnn
