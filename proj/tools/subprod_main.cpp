// Command-line front end: generation, validation, classification,
// restriction/refinement, towers, automorphism tools, continuity probes,
// embeddability verdicts and representations, with JSON/CSV output suitable
// for batch use and golden-file testing.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subprod/json_io.hpp"

namespace {

using namespace subprod;

double parse_real(const std::string& s) {
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw Error("usage", "malformed number '" + s + "'");
  return v;
}

// Complex literals use the locale-free form "re+imi", e.g. "2+0i" or
// "-0.5+0.1i"; a bare real part is also accepted.
Complex parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw Error("usage", "empty complex literal");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  for (size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      return {parse_real(body.substr(0, i)),
              parse_real(body[i] == '+' ? body.substr(i + 1) : body.substr(i))};
    }
  }
  return {0.0, parse_real(body)};
}

CVec2 parse_vec2(const std::string& s) {
  const size_t semi = s.find(';');
  if (semi == std::string::npos)
    throw Error("usage", "vector literal must be 're,im;re,im'");
  const auto comp = [](const std::string& part) {
    const size_t comma = part.find(',');
    if (comma == std::string::npos)
      throw Error("usage", "vector component must be 're,im'");
    return Complex(parse_real(part.substr(0, comma)), parse_real(part.substr(comma + 1)));
  };
  return {comp(s.substr(0, semi)), comp(s.substr(semi + 1))};
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stoi(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

struct Options {
  std::string type, lambda, eta_choices, roots, h_vec, input, thetas, out;
  double a = 0.0, c = 1.0, b = 0.0, tol = 1e-9;
  long long den = 1;
  int horizon = 4, m = 2, root = 0, depth = 2;
  bool text = false, verify = false;
};

Tolerance tolerance_of(const Options& opt) {
  return Tolerance(opt.tol, std::min(opt.tol, 1e-12));
}

SystemSpec spec_from_options(const CLI::App& cmd, const Options& opt) {
  const SystemType type = type_from_name(opt.type);
  switch (type) {
    case SystemType::E1:
      return SystemSpec::e1(opt.a);
    case SystemType::E2:
      return SystemSpec::e2(opt.a);
    case SystemType::E3:
      if (!opt.lambda.empty()) return SystemSpec::e3(parse_complex(opt.lambda));
      if (cmd.count("--c"))
        return SystemSpec::e3_rational(
            opt.c, opt.b,
            opt.eta_choices.empty() ? std::vector<int>{} : parse_int_list(opt.eta_choices));
      throw Error("usage", "e3 needs --lambda or --c/--b");
    case SystemType::E4:
      return SystemSpec::e4();
    case SystemType::E5:
      return SystemSpec::e5();
  }
  throw Error("usage", "unreachable");
}

int run(int argc, char** argv) {
  CLI::App app{"two-dimensional subproduct systems: canonical families, "
               "classification, automorphisms, towers, probes and embeddings"};
  app.require_subcommand(1);
  Options opt;

  auto* generate = app.add_subcommand("generate", "construct a canonical system");
  generate->add_option("--type", opt.type, "e1|e2|e3|e4|e5")->required();
  generate->add_option("--a", opt.a, "parameter a in [0,1) for e1/e2");
  generate->add_option("--lambda", opt.lambda, "per-step e3 parameter, e.g. '2+0i'");
  generate->add_option("--c", opt.c, "real-time magnitude law for rational e3");
  generate->add_option("--b", opt.b, "character exponent for rational e3");
  generate->add_option("--eta-choices", opt.eta_choices, "root choices, e.g. '1,0'");
  generate->add_option("--den", opt.den, "grid denominator")->required();
  generate->add_option("--horizon", opt.horizon, "grid horizon in steps")->required();
  generate->add_option("--out", opt.out, "output path (stdout when absent)");

  auto* validate = app.add_subcommand("validate", "check a system file");
  validate->add_option("file", opt.input)->required();
  validate->add_option("--tol", opt.tol, "structural tolerance");

  auto* classify_cmd = app.add_subcommand("classify", "classify a system file");
  classify_cmd->add_option("file", opt.input)->required();
  classify_cmd->add_option("--tol", opt.tol, "structural tolerance");
  classify_cmd->add_flag("--text", opt.text, "human-readable report");
  classify_cmd->add_flag("--json", "JSON report (default)");

  auto* restrict_cmd = app.add_subcommand("restrict", "restrict onto a sublattice");
  restrict_cmd->add_option("--m", opt.m, "sublattice factor")->required();
  restrict_cmd->add_option("file", opt.input)->required();
  restrict_cmd->add_option("--out", opt.out, "output path (stdout when absent)");

  auto* refine = app.add_subcommand("refine", "refine a spec (inverse restriction)");
  refine->add_option("--m", opt.m, "refinement factor")->required();
  refine->add_option("--root", opt.root, "root choice for e3");
  refine->add_option("file", opt.input)->required();
  refine->add_option("--out", opt.out, "output path (stdout when absent)");

  auto* tower = app.add_subcommand("tower", "build a factorial refinement tower");
  tower->add_option("--depth", opt.depth, "number of levels")->required();
  tower->add_option("--horizon", opt.horizon, "real-time horizon")->required();
  tower->add_option("--roots", opt.roots, "root choices per level, e.g. '1,0'");
  tower->add_option("file", opt.input, "spec JSON file")->required();
  tower->add_option("--out", opt.out, "output path (stdout when absent)");

  auto* aut = app.add_subcommand("auto", "automorphism tools");
  aut->require_subcommand(1);
  auto* aut_verify = aut->add_subcommand("verify", "verify a unitary family");
  aut_verify->add_option("file", opt.input)->required();
  aut_verify->add_option("thetas", opt.thetas)->required();
  aut_verify->add_option("--tol", opt.tol, "structural tolerance");
  auto* aut_decompose = aut->add_subcommand("decompose", "decompose into generators");
  aut_decompose->add_option("file", opt.input)->required();
  aut_decompose->add_option("thetas", opt.thetas)->required();
  aut_decompose->add_option("--tol", opt.tol, "structural tolerance");

  auto* probe = app.add_subcommand("probe", "sample the shift-overlap function");
  probe->set_help_flag("--help", "print help");  // frees -h for the vector option
  probe->add_option("file", opt.input)->required();
  probe->add_option("--h", opt.h_vec, "vector in the time-1 fiber, 're,im;re,im'")
      ->required();
  probe->add_option("--out", opt.out, "CSV output path (stdout when absent)");

  auto* probe_ext = app.add_subcommand("probe-extended",
                                       "doubled-vector probe of the first family");
  probe_ext->add_option("--a", opt.a, "parameter a in [0,1)")->required();
  probe_ext->add_option("--den", opt.den, "grid denominator")->required();
  probe_ext->add_option("--out", opt.out, "CSV output path (stdout when absent)");

  auto* embed_check = app.add_subcommand("embed-check", "embeddability verdict");
  embed_check->add_option("file", opt.input, "spec JSON file")->required();

  auto* represent = app.add_subcommand("represent", "build a Fock representation");
  represent->add_option("file", opt.input, "spec JSON file")->required();
  represent->add_option("--den", opt.den, "grid denominator")->required();
  represent->add_option("--horizon", opt.horizon, "grid horizon in steps (default den)");
  represent->add_flag("--verify", opt.verify, "verify the representation diagram");
  represent->add_option("--out", opt.out, "output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const Tolerance tol = tolerance_of(opt);

    if (generate->parsed()) {
      const SystemSpec spec = spec_from_options(*generate, opt);
      const GeneratedSystem g = generate_canonical(spec, opt.den, opt.horizon);
      emit(opt.out, system_to_json(g.system).dump(2) + "\n");
      return 0;
    }

    if (validate->parsed()) {
      const FiniteGridSystem sys = load_system(opt.input, tol);
      const double assoc = check_associativity(sys);
      if (assoc > tol.eps_structural)
        throw Error("associativity",
                    "maps fail the coassociativity diagram, residual " + std::to_string(assoc));
      const Json report{{"valid", true},
                        {"isometry_residual", max_isometry_residual(sys)},
                        {"associativity_residual", assoc}};
      std::cout << report.dump(2) << "\n";
      return 0;
    }

    if (classify_cmd->parsed()) {
      const FiniteGridSystem sys = load_system(opt.input, tol);
      const Classification cls = classify(sys, tol);
      if (opt.text) {
        std::printf("type: %s\n", type_name(cls.spec.type));
        if (cls.spec.type == SystemType::E1 || cls.spec.type == SystemType::E2)
          std::printf("a: %.12g  (raw |<x1,y1>| = %.3e, zero threshold %.1e)\n",
                      cls.spec.a, cls.inner_xy_magnitude, cls.small_a_threshold);
        if (cls.spec.type == SystemType::E3) {
          std::printf("lambda: %.12g%+.12gi\n", cls.spec.lambda->real(),
                      cls.spec.lambda->imag());
          if (cls.rational_c.has_value()) std::printf("c: %.12g\n", *cls.rational_c);
        }
        std::printf("residual: %.3e\ndiscriminant margin: %.3e\n", cls.residual,
                    cls.discriminant_margin);
      } else {
        std::cout << classification_to_json(cls).dump(2) << "\n";
      }
      return 0;
    }

    if (restrict_cmd->parsed()) {
      const FiniteGridSystem sys = load_system(opt.input, tol);
      emit(opt.out, system_to_json(restrict_system(sys, opt.m)).dump(2) + "\n");
      return 0;
    }

    if (refine->parsed()) {
      const SystemSpec spec = spec_from_json(read_json_file(opt.input));
      emit(opt.out, spec_to_json(refine_spec(spec, opt.m, opt.root)).dump(2) + "\n");
      return 0;
    }

    if (tower->parsed()) {
      const SystemSpec spec = spec_from_json(read_json_file(opt.input));
      const std::vector<int> roots =
          opt.roots.empty() ? std::vector<int>{} : parse_int_list(opt.roots);
      const RefinementTower t = build_tower(spec, opt.depth, roots, opt.horizon);
      Json j = tower_to_json(t);
      j["compatibility_residual"] = tower_compatibility_residual(t);
      if (spec.type == SystemType::E3 || t.base.type == SystemType::E3)
        j["eta"] = eta_to_json(eta_from_tower(t));
      emit(opt.out, j.dump(2) + "\n");
      return 0;
    }

    if (aut_verify->parsed() || aut_decompose->parsed()) {
      const FiniteGridSystem sys = load_system(opt.input, tol);
      const std::vector<Mat2> thetas = thetas_from_json(read_json_file(opt.thetas));
      if (aut_verify->parsed()) {
        const double res = verify_automorphism(sys, thetas);
        std::cout << Json{{"residual", res}, {"automorphism", res <= tol.eps_structural}}
                         .dump(2)
                  << "\n";
        return 0;
      }
      const Classification cls = classify(sys, tol);
      const GeneratorWord word = decompose_automorphism(sys, cls, thetas, tol);
      std::cout << word_to_json(word).dump(2) << "\n";
      return 0;
    }

    if (probe->parsed()) {
      const FiniteGridSystem sys = load_system(opt.input, tol);
      const ProbeTable table = continuity_probe(sys, parse_vec2(opt.h_vec));
      emit(opt.out, probe_to_csv(table, true));
      return 0;
    }

    if (probe_ext->parsed()) {
      const ProbeTable table = extended_probe_type1(opt.a, opt.den);
      emit(opt.out, probe_to_csv(table, false));
      return 0;
    }

    if (embed_check->parsed()) {
      const SystemSpec spec = spec_from_json(read_json_file(opt.input));
      std::cout << verdict_to_json(decide_embeddable(spec)).dump(2) << "\n";
      return 0;
    }

    if (represent->parsed()) {
      const SystemSpec spec = spec_from_json(read_json_file(opt.input));
      const int horizon = represent->count("--horizon") ? opt.horizon
                                                        : static_cast<int>(opt.den);
      const Representation rep = build_representation(spec, opt.den, horizon);
      Json j = representation_to_json(rep);
      if (opt.verify) {
        const FiniteGridSystem sys =
            generate_canonical(representation_grid_spec(spec, opt.den), opt.den, horizon)
                .system;
        double iso = 0.0, diagram = 0.0;
        for (int k = 1; k <= horizon; ++k) {
          iso = std::max(iso, representation_isometry_defect(rep, k, CVec2(1.0, 0.0)));
          iso = std::max(iso, representation_isometry_defect(rep, k, CVec2(0.0, 1.0)));
        }
        for (int s = 1; s < horizon; ++s)
          for (int t = 1; s + t <= horizon; ++t)
            diagram = std::max(diagram, verify_representation(rep, sys, s, t));
        j["verify"] = Json{{"isometry_defect", iso}, {"diagram_defect", diagram}};
      }
      emit(opt.out, j.dump(2) + "\n");
      return 0;
    }

    throw Error("usage", "no subcommand selected");
  } catch (const Error& e) {
    std::cerr << Json{{"code", e.code()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"code", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
