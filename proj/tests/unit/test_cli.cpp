#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

const std::string kCli = SUBPROD_CLI_PATH;
const std::string kGolden = SUBPROD_GOLDEN_DIR;
const std::string kTmp = "/tmp/subprod_cli_test";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

struct RunResult {
  int status;
  std::string out, err;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = kTmp + ".out", err_path = kTmp + ".err";
  const std::string cmd = kCli + " " + args + " > " + out_path + " 2> " + err_path;
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

void check_golden(const std::string& name, const std::string& got) {
  const std::string want = slurp(kGolden + "/" + name);
  CHECK_MESSAGE(got == want, "output differs from golden file ", name);
}

}  // namespace

TEST_CASE("cli generate is deterministic and matches its golden file") {
  const auto r1 = run_cli("generate --type e3 --lambda 2+0i --den 1 --horizon 4");
  REQUIRE(r1.status == 0);
  const auto r2 = run_cli("generate --type e3 --lambda 2+0i --den 1 --horizon 4");
  CHECK(r1.out == r2.out);
  check_golden("generate_e3.json", r1.out);

  const auto r3 = run_cli("generate --type e1 --a 0.3 --den 1 --horizon 4");
  REQUIRE(r3.status == 0);
  check_golden("generate_e1.json", r3.out);
}

TEST_CASE("cli validate accepts canonical systems and flags corruption") {
  const std::string path = kTmp + "_sys.json";
  REQUIRE(run_cli("generate --type e2 --a 0.4 --den 1 --horizon 4 --out " + path).status ==
          0);
  const auto ok = run_cli("validate " + path);
  CHECK(ok.status == 0);
  check_golden("validate_e2.json", ok.out);

  auto j = nlohmann::json::parse(slurp(path));
  for (auto& entry : j["maps"])
    if (entry["s"] == 1 && entry["t"] == 1)
      for (auto& z : entry["matrix"]) z[0] = z[0].get<double>() * 0.5;
  const std::string bad_path = kTmp + "_bad.json";
  spit(bad_path, j.dump(2));
  const auto bad = run_cli("validate " + bad_path);
  CHECK(bad.status == 2);
  const auto diag = nlohmann::json::parse(bad.err);
  CHECK(diag["code"] == "isometry");
  CHECK(diag["message"].get<std::string>().find("(1,1)") != std::string::npos);
}

TEST_CASE("cli classify reports the recovered family") {
  const std::string path = kTmp + "_cls.json";
  REQUIRE(
      run_cli("generate --type e3 --lambda 2+0i --den 1 --horizon 4 --out " + path).status ==
      0);
  const auto r = run_cli("classify " + path);
  REQUIRE(r.status == 0);
  check_golden("classify_e3.json", r.out);

  const auto text = run_cli("classify --text " + path);
  REQUIRE(text.status == 0);
  CHECK(text.out.find("type: e3") != std::string::npos);
}

TEST_CASE("cli restrict and refine") {
  const std::string path = kTmp + "_res.json";
  REQUIRE(
      run_cli("generate --type e3 --lambda 0+1i --den 1 --horizon 4 --out " + path).status ==
      0);
  const auto r = run_cli("restrict --m 2 " + path);
  REQUIRE(r.status == 0);
  check_golden("restrict_e3_m2.json", r.out);

  const std::string spec_path = kTmp + "_spec.json";
  spit(spec_path, "{\"type\":\"e3\",\"lambda\":[4.0,0.0]}\n");
  const auto ref = run_cli("refine --m 2 --root 1 " + spec_path);
  REQUIRE(ref.status == 0);
  check_golden("refine_e3_m2r1.json", ref.out);

  spit(spec_path, "{\"type\":\"e2\",\"a\":0.3}\n");
  const auto bad = run_cli("refine --m 2 " + spec_path);
  CHECK(bad.status == 2);
  CHECK(nlohmann::json::parse(bad.err)["code"] == "e2_refinement");
}

TEST_CASE("cli tower") {
  const std::string spec_path = kTmp + "_tspec.json";
  spit(spec_path, "{\"type\":\"e3\",\"c\":2.0,\"b\":1.0}\n");
  const auto r = run_cli("tower --depth 2 --horizon 2 " + spec_path);
  REQUIRE(r.status == 0);
  check_golden("tower_e3_d2.json", r.out);
}

TEST_CASE("cli automorphism tools") {
  const std::string path = kTmp + "_aut.json";
  REQUIRE(run_cli("generate --type e4 --den 1 --horizon 3 --out " + path).status == 0);
  const std::string thetas_path = kTmp + "_thetas.json";
  spit(thetas_path,
       "[{\"k\":1,\"matrix\":[[1,0],[0,0],[0,0],[1,0]]},"
       "{\"k\":2,\"matrix\":[[1,0],[0,0],[0,0],[1,0]]},"
       "{\"k\":3,\"matrix\":[[1,0],[0,0],[0,0],[1,0]]}]");
  const auto ver = run_cli("auto verify " + path + " " + thetas_path);
  REQUIRE(ver.status == 0);
  check_golden("auto_verify_identity.json", ver.out);

  const auto dec = run_cli("auto decompose " + path + " " + thetas_path);
  REQUIRE(dec.status == 0);
  check_golden("auto_decompose_identity.json", dec.out);
}

TEST_CASE("cli probes") {
  const std::string path = kTmp + "_probe.json";
  REQUIRE(run_cli("generate --type e4 --den 4 --horizon 4 --out " + path).status == 0);
  const auto r = run_cli("probe " + path + " --h '0,0;1,0'");
  REQUIRE(r.status == 0);
  check_golden("probe_e4.csv", r.out);

  const auto ext = run_cli("probe-extended --a 0.5 --den 8");
  REQUIRE(ext.status == 0);
  check_golden("probe_extended_a05.csv", ext.out);
}

TEST_CASE("cli embed-check and represent") {
  const std::string spec_path = kTmp + "_espec.json";
  spit(spec_path, "{\"type\":\"e5\"}\n");
  const auto e5 = run_cli("embed-check " + spec_path);
  REQUIRE(e5.status == 0);
  check_golden("embed_check_e5.json", e5.out);

  spit(spec_path, "{\"type\":\"e3\",\"c\":1.0,\"b\":0.0}\n");
  const auto e3 = run_cli("embed-check " + spec_path);
  REQUIRE(e3.status == 0);
  check_golden("embed_check_e3.json", e3.out);

  const auto rep = run_cli("represent " + spec_path + " --den 2 --verify");
  REQUIRE(rep.status == 0);
  check_golden("represent_e3_den2.json", rep.out);
}

TEST_CASE("cli usage errors exit with status one") {
  CHECK(run_cli("generate --type e9 --den 1 --horizon 4").status == 2);
  CHECK(run_cli("nonsense").status == 1);
  CHECK(run_cli("generate").status == 1);
}
