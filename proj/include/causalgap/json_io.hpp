#ifndef CAUSALGAP_JSON_IO_HPP
#define CAUSALGAP_JSON_IO_HPP

#include <json.hpp>
#include <string>

#include "causalgap/bell.hpp"
#include "causalgap/graph.hpp"
#include "causalgap/quantum.hpp"
#include "causalgap/scenarios.hpp"
#include "causalgap/table.hpp"

namespace causalgap {

// Insertion-ordered JSON keeps every emitted file byte-stable.
using njson = nlohmann::ordered_json;

/// {"nodes":[{"name":"A","kind":"latent"},...],"edges":[["B","D"],...]}
njson graph_to_json(const CausalGraph& g);
CausalGraph graph_from_json(const njson& j);

/// {"vars":[{"name":"C","card":2},...],"probs":{"0,0,0,0":"(2+1*sqrt2)/32",...}}
/// Assignment keys are comma-joined digits in variable order; every cell is
/// present, in lexicographic order.
njson table_to_json(const JointTable& t);
JointTable table_from_json(const njson& j);

/// {"graph":{...},"nodes":{"B":{"type":"quantum","state":[[[re,im],...],...],
/// "wiring":[{"latent":"B","factor":"D","dim":2},...]},"D":{"type":"povm",
/// "outcomes":2,"elements":{"0":[matrix,...],...}},"E":{"type":"cpd","card":2,
/// "rows":{"0,0,0":["1","0"],...}},"A":{"type":"classical","probs":["1/2","1/2"]}}}
njson model_to_json(const QuantumModel& m);
QuantumModel model_from_json(const njson& j);

njson bell_to_json(const BellData& b);
njson lhv_to_json(const LhvResult& r);

njson report_to_json(const ScenarioReport& r);
std::string report_to_text(const ScenarioReport& r);

njson load_json_file(const std::string& path);
void save_json_file(const std::string& path, const njson& j);

/// Fixed 6-decimal rendering used everywhere a float is printed.
std::string format_decimal(double x);

}  // namespace causalgap

#endif
