// End-to-end checks of the command-line tool: exit codes, pinned outputs,
// JSON determinism, corpus generation, and violation replay. Each case
// spawns the real binary (GALKIT_BIN, injected by the build).

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "json.hpp"

#include "galkit/corpus.hpp"
#include "galkit/galois.hpp"
#include "galkit/io.hpp"
#include "support/tables.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace galkit;

namespace {

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string read_all(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  REQUIRE(os.good());
  os << text;
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("galkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path o = scratch_dir() / ("stdout" + std::to_string(counter) + ".txt");
  fs::path e = scratch_dir() / ("stderr" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = std::string(GALKIT_BIN) + " " + args + " >" + o.string() + " 2>" + e.string();
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return RunResult{WEXITSTATUS(rc), read_all(o), read_all(e)};
}

// Table and morphism fixtures, written once.
struct Fixtures {
  fs::path dir;
  fs::path klein4, z2, z4, z8, s3, s3ab, q8, v4, ut2, ring_z8;
  fs::path z4_to_z2, s3_to_z2, q8_to_v, z2_into_z4;
};

const Fixtures& fixtures() {
  static Fixtures f = [] {
    Fixtures x;
    x.dir = scratch_dir() / "fixtures";
    fs::create_directories(x.dir);
    auto put = [&](const char* name, const std::string& text) {
      fs::path p = x.dir / name;
      write_file(p, text);
      return p;
    };
    auto z4 = cyclic_group(4);
    auto z2 = cyclic_group(2);
    auto s3 = dihedral(3);
    auto q8 = dicyclic(2);
    x.klein4 = put("klein4.alg", algebra_to_text(*abelian_group({2, 2})));
    x.z2 = put("z2.alg", algebra_to_text(*z2));
    x.z4 = put("z4.alg", algebra_to_text(*z4));
    x.z8 = put("z8.alg", algebra_to_text(*cyclic_group(8)));
    x.s3 = put("s3.alg", algebra_to_text(*s3));
    x.q8 = put("q8.alg", algebra_to_text(*q8));
    x.ut2 = put("ut2.alg", algebra_to_text(*tables::ut2_f2_ring()));
    x.ring_z8 = put("ring_z8.alg", algebra_to_text(*cyclic_ring(8)));

    auto qz4 = quotient(z4, normal_subobject(z4, {0, 2}));
    put("z4_quot.alg", algebra_to_text(*qz4.obj));
    x.z4_to_z2 = put("z4_to_z2.mor", morphism_to_text(qz4.q, "z4.alg", "z4_quot.alg"));

    auto s3r = reflector_ab().reflect(s3);
    x.s3ab = put("s3ab.alg", algebra_to_text(*s3r.obj));
    x.s3_to_z2 = put("s3_to_z2.mor", morphism_to_text(s3r.unit, "s3.alg", "s3ab.alg"));

    auto qv = quotient(q8, normal_subobject(q8, {0, 2}));  // {1, a^2} is the centre
    x.v4 = put("v4.alg", algebra_to_text(*qv.obj));
    x.q8_to_v = put("q8_to_v.mor", morphism_to_text(qv.q, "q8.alg", "v4.alg"));

    x.z2_into_z4 =
        put("z2_into_z4.mor", morphism_to_text(make_morphism(z2, z4, {0, 2}), "z2.alg", "z4.alg"));
    return x;
  }();
  return f;
}

std::string q(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("h2").code == 2);
  CHECK(run_cli("corpus").code == 2);
  CHECK(run_cli("verify").code == 2);
  CHECK(run_cli("verify no-such-suite --reflector ab").code == 2);
  CHECK(run_cli("verify closure-axioms").code == 2);
  CHECK(run_cli("verify closure-axioms --reflector id").code == 2);
  CHECK(run_cli("h2 --group " + q(fixtures().klein4) + " --format yaml").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("h2 pinned outputs") {
  auto r = run_cli("h2 --group " + q(fixtures().klein4));
  CHECK(r.code == 0);
  CHECK(r.out == "Z/2\n");

  auto rm = run_cli("h2 --group " + q(fixtures().z4) + " --mod 2");
  CHECK(rm.code == 0);
  CHECK(rm.out == "Z/2\n");

  CHECK(run_cli("h2 --group " + q(fixtures().ring_z8)).code == 2);
  CHECK(run_cli("h2 --group " + q(fixtures().z4) + " --mod 1").code == 2);
  CHECK(run_cli("h2 --group " + q(scratch_dir() / "missing.alg")).code == 2);
}

TEST_CASE("pi1 pinned outputs") {
  auto r = run_cli("pi1 --fgab 2,2 --coeff ab");
  CHECK(r.code == 0);
  CHECK(r.out == "Z/2\n");
  CHECK(run_cli("pi1 --fgab 2,2 --coeff abtf").out == "0\n");
  CHECK(run_cli("pi1 --fgab 0,0").out == "Z\n");
  CHECK(run_cli("pi1 --fgab 2,2 --coeff tf").code == 2);
}

TEST_CASE("reflect") {
  auto r = run_cli("reflect --reflector ab --algebra " + q(fixtures().s3) + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["results"]["reflected"] == iso_type(cyclic_group(2)));
  CHECK(j["results"]["member"] == false);
  CHECK(j["results"]["unit_kernel"] == json({0, 1, 2}));

  auto rt = run_cli("reflect --reflector tf --fgab 0,2 --format json");
  CHECK(rt.code == 0);
  CHECK(json::parse(rt.out)["results"]["reflected"] == "Z");

  CHECK(run_cli("reflect --reflector red --algebra " + q(fixtures().ut2)).code == 2);
  CHECK(run_cli("reflect --reflector ab --algebra " + q(fixtures().ring_z8)).code == 2);
}

TEST_CASE("closure") {
  auto r = run_cli("closure --reflector red --algebra " + q(fixtures().ring_z8) +
                   " --subobject 0 --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["results"]["closure"] == json({0, 2, 4, 6}));
  CHECK(j["results"]["closed"] == false);

  CHECK(run_cli("closure --reflector red --algebra " + q(fixtures().ring_z8) +
                " --subobject 0,1")
            .code == 2);

  auto rt = run_cli("closure --reflector tf --fgab 0 --subobject 2 --format json");
  CHECK(rt.code == 0);
  json jt = json::parse(rt.out);
  CHECK(jt["results"]["closure_type"] == "Z");
  CHECK(jt["results"]["closed"] == false);
}

TEST_CASE("classify-ext") {
  CHECK(run_cli("classify-ext --adjunction ab --map " + q(fixtures().z2_into_z4)).code == 2);

  auto r = run_cli("classify-ext --adjunction ab --map " + q(fixtures().z4_to_z2) +
                   " --total " + q(fixtures().z4) + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["results"]["trivial"] == true);
  CHECK(j["results"]["normal"] == true);
  CHECK(j["results"]["b_central"] == true);
  CHECK(j["results"]["kernel"] == json({0, 2}));

  auto rs = run_cli("classify-ext --adjunction ab --map " + q(fixtures().s3_to_z2) +
                    " --format json");
  CHECK(rs.code == 0);
  json js = json::parse(rs.out);
  CHECK(js["results"]["trivial"] == false);
  CHECK(js["results"]["normal"] == false);
  CHECK(js["results"]["b_central"] == false);

  auto rr = run_cli("classify-ext --adjunction red --map " + q(fixtures().z4_to_z2));
  CHECK(rr.code == 2);  // ring reflector on a group table

  CHECK(run_cli("classify-ext --adjunction ab --map " + q(fixtures().z4_to_z2) +
                " --total " + q(fixtures().s3))
            .code == 2);
}

TEST_CASE("relcomm") {
  auto r = run_cli("relcomm --adjunction ab --map " + q(fixtures().s3_to_z2) + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["results"]["b_central"] == false);
  CHECK(j["results"]["relative_commutator"] == j["results"]["kernel"]);
}

TEST_CASE("centralize and galois-group") {
  auto r = run_cli("centralize --adjunction ab --map " + q(fixtures().q8_to_v) + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["results"]["total"] == iso_type(dicyclic(2)));

  auto g = run_cli("galois-group --adjunction ab --map " + q(fixtures().q8_to_v) +
                   " --format json");
  CHECK(g.code == 0);
  json jg = json::parse(g.out);
  CHECK(jg["results"]["galois_group"] == iso_type(cyclic_group(2)));
  CHECK(jg["results"]["order"] == 2);

  auto gz = run_cli("galois-group --adjunction ab --map " + q(fixtures().z4_to_z2) +
                    " --format json");
  CHECK(gz.code == 0);
  CHECK(json::parse(gz.out)["results"]["order"] == 1);

  CHECK(run_cli("galois-group --adjunction ab --map " + q(fixtures().s3_to_z2)).code == 2);
}

TEST_CASE("hopf and hopf-identity") {
  auto r = run_cli("hopf --adjunction ab --pres " + q(fixtures().q8) + ":" +
                   q(fixtures().q8_to_v) + " --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["results"]["value"] == iso_type(cyclic_group(2)));
  CHECK(j["results"]["numerator"] == json({0, 2}));
  CHECK(j["results"]["denominator"] == json({0}));

  auto ri = run_cli("hopf-identity --adjunction ab --map " + q(fixtures().q8_to_v) +
                    " --format json");
  CHECK(ri.code == 0);
  json ji = json::parse(ri.out);
  CHECK(ji["results"]["holds"] == true);
  CHECK(ji["results"]["galois"] == ji["results"]["formula"]);

  // Presentation file that is not the domain of the map.
  CHECK(run_cli("hopf --adjunction ab --pres " + q(fixtures().z4) + ":" +
                q(fixtures().q8_to_v))
            .code == 2);
  // Non-subvariety inner reflector.
  CHECK(run_cli("hopf --adjunction red --map " + q(fixtures().z4_to_z2)).code == 2);
}

TEST_CASE("json reports are byte-identical for fixed seed and flags") {
  std::string cmd = "verify closure-axioms --reflector ab --max-size 6 --format json "
                    "--seed 7 --jobs 3";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  json j = json::parse(a.out);
  CHECK(j["violations"].empty());
  CHECK(j["results"]["checks"].get<uint64_t>() > 0);
}

TEST_CASE("verify red closure axioms over the ring corpus") {
  auto r = run_cli("verify closure-axioms --reflector red --max-size 6 --format json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["violations"].empty());
}

TEST_CASE("verify fermeture: tf strictness, red exactness") {
  auto r = run_cli("verify fermeture --reflector tf --max-size 60 --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["violations"].empty());
  CHECK(!j["results"]["strict_witnesses"].empty());

  auto rr = run_cli("verify fermeture --reflector red --max-size 6 --format json");
  CHECK(rr.code == 0);
  json jr = json::parse(rr.out);
  CHECK(jr["violations"].empty());
  CHECK(jr["results"]["strict_witnesses"].empty());
}

TEST_CASE("violation replay round-trips") {
  auto r = run_cli("verify fermeture --reflector tf --max-size 40 --expect-birkhoff "
                   "--format json --seed 5");
  CHECK(r.code == 1);
  json j = json::parse(r.out);
  REQUIRE(!j["violations"].empty());
  fs::path rep = scratch_dir() / "report.json";
  write_file(rep, r.out);

  auto p = run_cli("replay --file " + q(rep));
  CHECK(p.code == 1);
  CHECK(p.out.find("reproduced") != std::string::npos);

  auto pj = run_cli("replay --file " + q(rep) + " --format json");
  CHECK(pj.code == 1);
  fs::path rep2 = scratch_dir() / "report2.json";
  write_file(rep2, pj.out);
  CHECK(run_cli("replay --file " + q(rep2)).code == 2);  // replay of a replay

  CHECK(run_cli("replay --file " + q(scratch_dir() / "missing.json")).code == 2);

  fs::path garbled = scratch_dir() / "garbled.json";
  write_file(garbled, "{not json");
  CHECK(run_cli("replay --file " + q(garbled)).code == 2);
}

TEST_CASE("replay rejects changed inputs") {
  fs::path copy = scratch_dir() / "h2_input.alg";
  write_file(copy, algebra_to_text(*abelian_group({2, 2})));
  auto r = run_cli("h2 --group " + q(copy) + " --format json");
  CHECK(r.code == 0);
  fs::path rep = scratch_dir() / "h2_report.json";
  write_file(rep, r.out);
  CHECK(run_cli("replay --file " + q(rep)).code == 0);

  write_file(copy, algebra_to_text(*cyclic_group(4)));
  CHECK(run_cli("replay --file " + q(rep)).code == 2);
}

TEST_CASE("corpus gen is deterministic and verified") {
  fs::path da = scratch_dir() / "corpus_a";
  fs::path db = scratch_dir() / "corpus_b";
  auto a = run_cli("corpus gen --out " + q(da) + " --max-size 4");
  CHECK(a.code == 0);
  auto b = run_cli("corpus gen --out " + q(db) + " --max-size 4");
  CHECK(b.code == 0);
  CHECK(read_all(da / "manifest.json") == read_all(db / "manifest.json"));

  json m = json::parse(read_all(da / "manifest.json"));
  CHECK(m["counts"]["groups"] == json({{"1", 1}, {"2", 1}, {"3", 1}, {"4", 2}}));
  CHECK(m["counts"]["rings"]["4"] == 11);
  CHECK(fs::exists(da / "groups" / "group_04_01.alg"));

  auto h = run_cli("h2 --group " + q(da / "klein4.alg"));
  CHECK(h.code == 0);
  CHECK(h.out == "Z/2\n");
}

TEST_CASE("verify hopf-identity on a capped corpus") {
  auto r = run_cli("verify hopf-identity --variety rng --max-size 4 --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["violations"].empty());
  CHECK(j["results"]["checks"].get<uint64_t>() > 0);
  CHECK(j["results"]["reflector"] == "crng+red");

  CHECK(run_cli("verify hopf-identity --adjunction red --variety rng").code == 2);
}
