#include "subprod/json_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace subprod {

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("schema", "complex values are two-element arrays [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const Time& t) { return Json{{"num", t.num()}, {"den", t.den()}}; }

Json spec_to_json(const SystemSpec& spec) {
  Json j{{"type", type_name(spec.type)}};
  switch (spec.type) {
    case SystemType::E1:
    case SystemType::E2:
      j["a"] = spec.a;
      break;
    case SystemType::E3:
      if (spec.lambda.has_value()) {
        j["lambda"] = to_json(*spec.lambda);
      } else {
        j["c"] = *spec.c;
        j["b"] = *spec.b;
        if (!spec.eta_choices.empty()) j["eta_choices"] = spec.eta_choices;
      }
      break;
    default:
      break;
  }
  return j;
}

SystemSpec spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw Error("schema", "spec needs a 'type' field");
  const SystemType type = type_from_name(j["type"].get<std::string>());
  switch (type) {
    case SystemType::E1:
      return SystemSpec::e1(j.value("a", 0.0));
    case SystemType::E2:
      return SystemSpec::e2(j.value("a", 0.0));
    case SystemType::E3:
      if (j.contains("lambda")) return SystemSpec::e3(complex_from_json(j["lambda"]));
      if (j.contains("c")) {
        std::vector<int> choices;
        if (j.contains("eta_choices")) choices = j["eta_choices"].get<std::vector<int>>();
        return SystemSpec::e3_rational(j["c"].get<double>(), j.value("b", 0.0),
                                       std::move(choices));
      }
      throw Error("schema", "e3 spec needs 'lambda' or 'c'/'b'");
    case SystemType::E4:
      return SystemSpec::e4();
    case SystemType::E5:
      return SystemSpec::e5();
  }
  throw Error("schema", "unreachable");
}

Json system_to_json(const FiniteGridSystem& sys) {
  Json maps = Json::array();
  for (const auto& [key, map] : sys.maps) {
    Json entries = Json::array();
    for (int t = 0; t < 8; ++t) entries.push_back(to_json(map.m[static_cast<size_t>(t)]));
    maps.push_back(Json{{"s", key.first}, {"t", key.second}, {"matrix", entries}});
  }
  return Json{{"denominator", sys.denominator}, {"horizon", sys.horizon}, {"maps", maps}};
}

FiniteGridSystem system_from_json(const Json& j, const Tolerance& tol) {
  if (!j.is_object() || !j.contains("denominator") || !j.contains("horizon") ||
      !j.contains("maps") || !j["maps"].is_array())
    throw Error("schema", "system needs 'denominator', 'horizon' and 'maps'");
  FiniteGridSystem sys;
  sys.denominator = j["denominator"].get<long long>();
  sys.horizon = j["horizon"].get<int>();
  if (sys.denominator < 1) throw Error("schema", "denominator must be >= 1");
  if (sys.horizon < 2) throw Error("schema", "horizon must be >= 2");

  for (const auto& entry : j["maps"]) {
    if (!entry.contains("s") || !entry.contains("t") || !entry.contains("matrix") ||
        !entry["matrix"].is_array() || entry["matrix"].size() != 8)
      throw Error("schema", "each map needs 's', 't' and an 8-entry 'matrix'");
    const int s = entry["s"].get<int>();
    const int t = entry["t"].get<int>();
    if (s < 1 || t < 1 || s + t > sys.horizon)
      throw Error("schema", "map (" + std::to_string(s) + "," + std::to_string(t) +
                                ") lies outside the horizon");
    if (sys.maps.count({s, t}))
      throw Error("schema", "duplicate map (" + std::to_string(s) + "," +
                                std::to_string(t) + ")");
    Isometry42 m;
    for (int i = 0; i < 8; ++i)
      m.m[static_cast<size_t>(i)] = complex_from_json(entry["matrix"][static_cast<size_t>(i)]);
    const double res = isometry_residual(m);
    if (res > tol.eps_structural)
      throw Error("isometry", "map (" + std::to_string(s) + "," + std::to_string(t) +
                                  ") is not isometric, residual " + std::to_string(res));
    sys.maps[{s, t}] = m;
  }

  for (int s = 1; s + 1 <= sys.horizon; ++s)
    for (int t = 1; s + t <= sys.horizon; ++t)
      if (!sys.maps.count({s, t}))
        throw Error("completeness", "missing map (" + std::to_string(s) + "," +
                                        std::to_string(t) + ")");
  return sys;
}

void save_system(const FiniteGridSystem& sys, const std::string& path) {
  write_file(path, system_to_json(sys).dump(2) + "\n");
}

FiniteGridSystem load_system(const std::string& path, const Tolerance& tol) {
  return system_from_json(read_json_file(path), tol);
}

Json thetas_to_json(const std::vector<Mat2>& thetas) {
  Json j = Json::array();
  for (size_t k = 0; k < thetas.size(); ++k) {
    Json entries = Json::array();
    for (int t = 0; t < 4; ++t) entries.push_back(to_json(thetas[k].m[static_cast<size_t>(t)]));
    j.push_back(Json{{"k", k + 1}, {"matrix", entries}});
  }
  return j;
}

std::vector<Mat2> thetas_from_json(const Json& j) {
  if (!j.is_array()) throw Error("schema", "unitary family must be an array");
  std::vector<Mat2> out;
  out.resize(j.size());
  std::vector<bool> seen(j.size(), false);
  for (const auto& entry : j) {
    if (!entry.contains("k") || !entry.contains("matrix") || !entry["matrix"].is_array() ||
        entry["matrix"].size() != 4)
      throw Error("schema", "each unitary needs 'k' and a 4-entry 'matrix'");
    const size_t k = entry["k"].get<size_t>();
    if (k < 1 || k > out.size() || seen[k - 1])
      throw Error("schema", "unitary steps must be 1..n without repeats");
    seen[k - 1] = true;
    for (int t = 0; t < 4; ++t)
      out[k - 1].m[static_cast<size_t>(t)] =
          complex_from_json(entry["matrix"][static_cast<size_t>(t)]);
  }
  return out;
}

Json classification_to_json(const Classification& cls) {
  Json j{{"type", type_name(cls.spec.type)},
         {"residual", cls.residual},
         {"discriminant_margin", cls.discriminant_margin},
         {"denominator", cls.denominator},
         {"horizon", cls.horizon}};
  switch (cls.spec.type) {
    case SystemType::E1:
    case SystemType::E2:
      j["a"] = cls.spec.a;
      j["inner_xy_magnitude"] = cls.inner_xy_magnitude;
      j["small_a_threshold"] = cls.small_a_threshold;
      break;
    case SystemType::E3:
      j["lambda"] = to_json(*cls.spec.lambda);
      if (cls.rational_c.has_value()) {
        j["c"] = *cls.rational_c;
        Json eta = Json::array();
        for (const auto& v : cls.eta) eta.push_back(to_json(v));
        j["eta"] = eta;
      }
      break;
    default:
      break;
  }
  Json basis = Json::array();
  for (int k = 1; k <= cls.basis.size(); ++k) {
    basis.push_back(Json{{"k", k},
                         {"x", Json::array({to_json(cls.basis.x(k)[0]), to_json(cls.basis.x(k)[1])})},
                         {"y", Json::array({to_json(cls.basis.y(k)[0]), to_json(cls.basis.y(k)[1])})}});
  }
  j["basis"] = basis;
  return j;
}

Json word_to_json(const GeneratorWord& word) {
  Json j{{"c", word.c}, {"swap", word.swap}};
  if (word.extra_b.has_value()) j["b"] = *word.extra_b;
  return j;
}

GeneratorWord word_from_json(const Json& j) {
  GeneratorWord w;
  w.c = j.value("c", 0.0);
  w.swap = j.value("swap", false);
  if (j.contains("b")) w.extra_b = j["b"].get<double>();
  return w;
}

Json tower_to_json(const RefinementTower& tower) {
  Json levels = Json::array();
  for (const auto& level : tower.levels) {
    Json lj{{"denominator", level.denominator},
            {"spec", spec_to_json(level.step_spec)},
            {"system", system_to_json(level.system)}};
    levels.push_back(lj);
  }
  return Json{{"base", spec_to_json(tower.base)},
              {"depth", tower.depth},
              {"horizon", tower.horizon},
              {"root_choices", tower.root_choices},
              {"levels", levels}};
}

Json verdict_to_json(const Verdict& v) {
  Json j{{"embeddable", v.embeddable}, {"detail", v.detail}};
  if (!v.embeddable) j["reason"] = reason_name(v.reason);
  return j;
}

Json eta_to_json(const EtaFamily& eta) {
  Json j{{"descriptor", eta.descriptor == EtaFamily::Descriptor::Exponential
                            ? "exponential"
                            : "root_choices"},
         {"denominator", eta.denominator}};
  if (eta.descriptor == EtaFamily::Descriptor::Exponential)
    j["b"] = eta.b;
  else
    j["root_choices"] = eta.root_choices;
  Json values = Json::array();
  for (const auto& v : eta.values) values.push_back(to_json(v));
  j["values"] = values;
  return j;
}

namespace {

Json segment_to_json(const ExpSegment& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces) {
    Json terms = Json::array();
    for (const auto& t : p.terms)
      terms.push_back(Json{{"amp", to_json(t.amp)}, {"growth", t.growth}, {"freq", t.freq}});
    pieces.push_back(Json{{"lo", Json{{"num", p.lo.num}, {"den", p.lo.den}}},
                          {"hi", Json{{"num", p.hi.num}, {"den", p.hi.den}}},
                          {"terms", terms}});
  }
  return Json{{"length", Json{{"num", f.length.num}, {"den", f.length.den}}},
              {"pieces", pieces}};
}

}  // namespace

Json representation_to_json(const Representation& rep) {
  Json j{{"type", type_name(rep.type)},
         {"denominator", rep.denominator},
         {"horizon", rep.horizon}};
  if (rep.type == SystemType::E1) {
    j["a"] = rep.a;
  } else {
    j["c"] = rep.c;
    j["b"] = rep.b;
    j["norm_const"] = rep.norm_const;
  }
  Json steps = Json::array();
  for (int k = 1; k <= rep.horizon; ++k) {
    Json step{{"k", k}};
    if (rep.type == SystemType::E1) {
      const auto& [ax, ay] = rep.expv[static_cast<size_t>(k - 1)];
      Json terms = Json::array();
      for (const auto& t : ay.terms)
        terms.push_back(Json{{"coeff", to_json(t.coeff)}, {"arg", segment_to_json(t.arg)}});
      step["alpha_x"] = Json{{"exponential_of_zero", true}};
      step["alpha_y"] = Json{{"terms", terms}};
      (void)ax;
    } else {
      const auto& [ax, ay] = rep.fock01[static_cast<size_t>(k - 1)];
      step["alpha_x"] = Json{{"vacuum", to_json(ax.vacuum)}};
      step["alpha_y"] = Json{{"one_particle", segment_to_json(ay.one)}};
    }
    steps.push_back(step);
  }
  j["steps"] = steps;
  return j;
}

std::string probe_to_csv(const ProbeTable& table, bool closed_interval) {
  std::ostringstream out;
  out << "t_num,t_den,re,im\n";
  char buf[128];
  const auto row = [&](long long num, long long den, Complex v) {
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g,%.17g\n", num, den, v.real(), v.imag());
    out << buf;
  };
  row(0, 1, Complex(table.endpoint, 0.0));
  for (const auto& [t, v] : table.values) row(t.num(), t.den(), v);
  if (closed_interval) row(1, 1, Complex(table.endpoint, 0.0));
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("schema", "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  out << content;
}

}  // namespace subprod
