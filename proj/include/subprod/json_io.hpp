#pragma once

#include <string>

#include "json.hpp"
#include "subprod/classify.hpp"
#include "subprod/embed.hpp"
#include "subprod/morphisms.hpp"
#include "subprod/system.hpp"
#include "subprod/tower.hpp"

namespace subprod {

using Json = nlohmann::json;

// Complex numbers serialize as [re, im]; times as {"num": k, "den": N}.
Json to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json to_json(const Time& t);

Json spec_to_json(const SystemSpec& spec);
SystemSpec spec_from_json(const Json& j);

// System schema: {"denominator": N, "horizon": K,
//   "maps": [{"s": j, "t": k, "matrix": [8 complex entries, column-major 4x2]}]}
Json system_to_json(const FiniteGridSystem& sys);
FiniteGridSystem system_from_json(const Json& j, const Tolerance& tol = {});

void save_system(const FiniteGridSystem& sys, const std::string& path);
FiniteGridSystem load_system(const std::string& path, const Tolerance& tol = {});

// Unitary families: [{"k": step, "matrix": [4 complex entries, column-major 2x2]}]
Json thetas_to_json(const std::vector<Mat2>& thetas);
std::vector<Mat2> thetas_from_json(const Json& j);

Json classification_to_json(const Classification& cls);
Json word_to_json(const GeneratorWord& word);
GeneratorWord word_from_json(const Json& j);

Json tower_to_json(const RefinementTower& tower);
Json verdict_to_json(const Verdict& v);
Json representation_to_json(const Representation& rep);
Json eta_to_json(const EtaFamily& eta);

// CSV hand-off with columns t_num,t_den,re,im; endpoints included.
std::string probe_to_csv(const ProbeTable& table, bool closed_interval);

Json read_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace subprod
