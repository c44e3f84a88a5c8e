#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wsnd/config.hpp"
#include "wsnd/errors.hpp"

using namespace wsnd;

namespace {

const char* kMinimal = R"(schema_version = 1
seed = 5
sensors = 4
samples = 10
U = 3
Pt = 1
Pfa = 0.1
xi_a_db = -4
)";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("parse_config reads the minimal schema with defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.sensors == 4);
  CHECK(c.Pt == 1.0);
  CHECK(c.zeta == 0.1);
  CHECK(c.solver.lambda0_init == 1e-8);
  CHECK(c.solver.kappa == 1e-7);
  CHECK(c.channel == ChannelModel::kRayleigh);
  CHECK(c.threshold == ThresholdSource::kAnalytic);
}

TEST_CASE("config errors are line precise") {
  CHECK(error_of(std::string(kMinimal) + "bogus = 1\n") == "t.cfg:9: unknown field 'bogus'");
  CHECK(error_of(std::string(kMinimal) + "Pt = 2\n") == "t.cfg:9: duplicate field 'Pt'");
  CHECK(error_of(std::string(kMinimal) + "zeta = abc\n") == "t.cfg:9: invalid value for 'zeta': 'abc'");
  CHECK(error_of(std::string(kMinimal) + "just text\n") == "t.cfg:9: expected 'key = value'");
  std::string no_pt(kMinimal);
  no_pt.replace(no_pt.find("Pt = 1\n"), 7, "");
  CHECK(error_of(no_pt) == "t.cfg: missing required field 'Pt'");
  CHECK(error_of(std::string(kMinimal) + "sweep_pfa = 0.5, 0.1\n").find("sweep_pfa") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "schemes = ED\n") == "t.cfg:9: invalid value for 'schemes': 'ED'");
}

TEST_CASE("config round trip is a fixed point") {
  for (const char* name : {"fig1", "fig2", "fig3", "fig4", "fig5"}) {
    CAPTURE(name);
    const auto c = load_config(std::filesystem::path(WSND_CONFIG_DIR) / (std::string(name) + ".cfg"));
    const auto text = serialize_config(c);
    const auto again = parse_config(text);
    CHECK(serialize_config(again) == text);
    CHECK(config_digest(again) == config_digest(c));
  }
  const auto c = parse_config(std::string(kMinimal) + "sweep_pt = 0.1, 1e3\nchannel = unit\n");
  CHECK(serialize_config(parse_config(serialize_config(c))) == serialize_config(c));
  CHECK(config_digest(c).size() == 16);
}

TEST_CASE("build_scenario is seeded") {
  const auto c = parse_config(kMinimal);
  const auto a = build_scenario(c);
  const auto b = build_scenario(c);
  CHECK(a.topology == b.topology);
  for (int i = 0; i < a.M(); ++i) CHECK(a.sensors[i].h() == b.sensors[i].h());
  const auto n50 = build_scenario(c, 50);
  CHECK(n50.N() == 50);
  for (int i = 0; i < a.M(); ++i) CHECK(n50.sensors[i].sigma2() == a.sensors[i].sigma2());
  CHECK(build_scenario(c, {}, 7.0).Pt == 7.0);
}

TEST_CASE("unit channel gives identical sensors") {
  const auto c = load_config(WSND_TEST_DATA_DIR "/identical.cfg");
  const auto sc = build_scenario(c);
  for (const auto& s : sc.sensors) {
    CHECK(s.h() == 1.0);
    CHECK(s.sigma2() == 1.0);
    CHECK(s.xi() == doctest::Approx(sc.sensors[0].xi()).epsilon(1e-15));
  }
}

TEST_CASE("topology_file overrides the geometric draw") {
  const auto dir = std::filesystem::temp_directory_path() / "wsnd_cfg_topo";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "g.txt") << "# vertices 4\n0 1\n1 2\n2 3\n";
  std::ofstream(dir / "c.cfg") << kMinimal << "topology_file = g.txt\n";
  const auto sc = build_scenario(load_config(dir / "c.cfg"));
  CHECK(sc.topology == Graph::path(4));
  std::filesystem::remove_all(dir);
}
