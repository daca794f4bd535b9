#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "inp2cpa/inp_model.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(INP2CPA_TEST_DATA) + "/" + name; }

inline std::string read(const std::string& name) {
    std::ifstream in(data_path(name), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline const char* const kOneRule = R"([TITLE]
one pump, one tank

[JUNCTIONS]
;ID  Elev  Demand
J1   10    0

[RESERVOIRS]
R1   50

[TANKS]
T1   20  3  0  8  12  0

[PIPES]
P1   J1  T1  100  300  110  0  Open

[PUMPS]
PU1  R1  J1  HEAD 1

[CONTROLS]
LINK PU1 OPEN IF NODE T1 BELOW 4.0

[END]
)";

inline inp2cpa::InpModel ctown() { return inp2cpa::parse_inp(read("ctown_subset.inp"), "ctown_subset.inp"); }

}  // namespace fixtures
