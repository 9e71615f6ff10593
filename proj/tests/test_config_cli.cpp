#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wpt/cli.hpp"
#include "wpt/config.hpp"
#include "wpt/error.hpp"

using namespace wpt;
using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(WPT_SOURCE_DIR) / "configs";

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const char* name) { return (kConfigs / name).string(); }

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wpt_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json reference_json() {
  std::ifstream in(config("reference_link.json"));
  return json::parse(in);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("reference configuration parses into SI units") {
    const auto cfg = load_config(config("reference_link.json"));
    REQUIRE(cfg.tx_coil.has_value());
    CHECK(cfg.tx_coil->outer_diameter == Approx(45.2e-3));
    CHECK(cfg.tx_coil->turns == 8);
    CHECK(cfg.rx_coil->trace_width == Approx(0.8e-3));
    REQUIRE(cfg.circuit.has_value());
    CHECK(cfg.circuit->params.topology == Topology::SP);
    CHECK(cfg.circuit->params.C1 == Approx(1.8e-9));
    CHECK_FALSE(cfg.circuit->r1_given);
    CHECK(cfg.gap == Approx(5e-3));
    CHECK(cfg.sweep->gaps.size() == 5);
    CHECK(*cfg.fit->anchors.p_load == Approx(0.7728));
    CHECK(cfg.design->constraints.target_inductance == Approx(1.589e-6));
    CHECK(cfg.warnings.empty());
  }

  TEST_CASE("missing resistances come from the coil model") {
    const auto cfg = load_config(config("reference_link.json"));
    const auto p = resolved_circuit(cfg);
    CHECK(p.R1 == Approx(series_resistance(*cfg.tx_coil, 3e6)));
    CHECK(p.R2 == Approx(series_resistance(*cfg.rx_coil, 3e6)));
    const auto fitted = resolved_circuit(load_config(config("reference_link_fitted_esr.json")));
    CHECK(fitted.R1 == Approx(5.489372));
  }

  TEST_CASE("every validation problem is reported at once") {
    json j = reference_json();
    j["tx_coil"]["turns"] = 0;
    j["rx_coil"].erase("trace_width_mm");
    j["circuit"]["topology"] = "XY";
    j["circuit"]["c1_nF"] = -1;
    try {
      parse_config(j);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("tx_coil.turns") != std::string::npos);
      CHECK(msg.find("rx_coil.trace_width_mm is required") != std::string::npos);
      CHECK(msg.find("circuit.topology") != std::string::npos);
      CHECK(msg.find("circuit.c1_nF must be positive") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(json::array()), ValidationError);
    CHECK_THROWS_AS(load_config(kConfigs / "does_not_exist.json"), ValidationError);
  }

  TEST_CASE("inconsistent geometry is a warning, not an error") {
    json j = reference_json();
    j["tx_coil"]["outer_diameter_mm"] = 50;
    const auto cfg = parse_config(j);
    REQUIRE(cfg.warnings.size() == 1);
    CHECK(cfg.warnings[0].find("tx_coil") != std::string::npos);
  }

  TEST_CASE("gap ranges expand inclusively") {
    json j = reference_json();
    j["sweep"].erase("gaps_mm");
    j["sweep"]["gap_start_mm"] = 5;
    j["sweep"]["gap_stop_mm"] = 15;
    j["sweep"]["gap_points"] = 3;
    const auto cfg = parse_config(j);
    REQUIRE(cfg.sweep->gaps.size() == 3);
    CHECK(cfg.sweep->gaps[1] == Approx(10e-3));
    CHECK(cfg.sweep->gaps[2] == Approx(15e-3));
  }

  TEST_CASE("measurement csv") {
    std::istringstream good("gap_mm,vrms_V\r\n5,3.2\n10,3.0\n\n15,2.2\n");
    const auto rows = read_measurements_csv(good);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].gap == Approx(5e-3));
    CHECK(rows[2].vout_rms == Approx(2.2));

    std::istringstream header("gap,v\n5,3\n");
    CHECK_THROWS_AS(read_measurements_csv(header), ValidationError);
    std::istringstream malformed("gap_mm,vrms_V\n5;3\n");
    CHECK_THROWS_AS(read_measurements_csv(malformed), ValidationError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_measurements_csv(empty), ValidationError);
  }

  TEST_CASE("measurement csv is resolved beside the config") {
    const auto dir = scratch_dir("csv");
    std::ofstream(dir / "m.csv") << "gap_mm,vrms_V\n5,3.2\n10,3.0\n";
    json j = reference_json();
    j["fit"]["measurements_csv"] = "m.csv";
    std::ofstream(dir / "cfg.json") << j.dump();
    const auto cfg = load_config(dir / "cfg.json");
    CHECK(cfg.fit->anchors.points.size() == 2);

    std::ofstream(dir / "bad.csv") << "gap_mm,vrms_V\n10,3.2\n5,3.0\n";
    j["fit"]["measurements_csv"] = "bad.csv";
    CHECK_THROWS_AS(parse_config(j, dir), ValidationError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("coil report") {
    const auto r = run_cli({"coil", config("reference_link.json")});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("Lt = 1.589 uH") != std::string::npos);
    CHECK(r.out.find("Lr = 0.802 uH") != std::string::npos);
    CHECK(r.err.empty());

    const auto j = run_cli({"coil", config("reference_link.json"), "--format", "json"});
    CHECK(j.code == cli::kOk);
    CHECK(json::parse(j.out).contains("tx"));
  }

  TEST_CASE("exit codes") {
    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"frobnicate", config("reference_link.json")}).code == cli::kUsage);
    CHECK(run_cli({"coil"}).code == cli::kUsage);
    CHECK(run_cli({"coil", config("reference_link.json"), "--format", "xml"}).code == cli::kUsage);

    const auto missing = run_cli({"coil", config("missing.json")});
    CHECK(missing.code == cli::kFailure);
    CHECK(missing.err.rfind("error: validation: ", 0) == 0);

    const auto bad_gap = run_cli({"couple", config("reference_link.json"), "--gap-mm", "-2"});
    CHECK(bad_gap.code == cli::kFailure);
    CHECK(bad_gap.err.rfind("error: ", 0) == 0);

    const auto unphysical = run_cli({"solve", config("reference_link.json"), "--m-nh", "5000"});
    CHECK(unphysical.code == cli::kFailure);
    CHECK(unphysical.err.find("error: ") == 0);
    CHECK(std::count(unphysical.err.begin(), unphysical.err.end(), '\n') == 1);

    CHECK(run_cli({"--help"}).code == cli::kOk);
  }

  TEST_CASE("solve with the link removed delivers nothing") {
    const auto r = run_cli({"solve", config("reference_link.json"), "--m-nh", "0"});
    REQUIRE(r.code == cli::kOk);
    const auto j = json::parse(r.out);
    CHECK(j["solution"]["efficiency"].get<double>() == 0.0);
    CHECK(j["link"]["M_nH"].get<double>() == 0.0);
  }

  TEST_CASE("couple reports the filament mutual inductance") {
    const auto r = run_cli({"couple", config("reference_link.json"), "--gap-mm", "10", "--format", "json"});
    REQUIRE(r.code == cli::kOk);
    const auto j = json::parse(r.out);
    CHECK(j["M_nH"].get<double>() == Approx(340.7).epsilon(1e-3));
    CHECK(j["gap_mm"].get<double>() == Approx(10));
  }

  TEST_CASE("gap sweep output") {
    const auto r = run_cli({"sweep-gap", config("reference_link_fitted_esr.json")});
    REQUIRE(r.code == cli::kOk);
    std::istringstream csv(r.out);
    std::string line;
    std::getline(csv, line);
    std::vector<double> vrms;
    while (std::getline(csv, line)) {
      std::vector<std::string> cells;
      std::istringstream row(line);
      for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
      REQUIRE(cells.size() == 8);
      vrms.push_back(std::stod(cells[3]));
    }
    REQUIRE(vrms.size() == 3);
    CHECK(vrms[0] > vrms[1]);
    CHECK(vrms[1] > vrms[2]);
  }

  TEST_CASE("output settings from the config") {
    const auto dir = scratch_dir("cfg_out");
    json j = reference_json();
    j["out_dir"] = "results";
    j["format"] = "json";
    std::ofstream(dir / "cfg.json") << j.dump();
    REQUIRE(run_cli({"couple", (dir / "cfg.json").string()}).code == cli::kOk);
    CHECK(fs::exists(dir / "results" / "couple.json"));

    const auto flag = run_cli({"couple", (dir / "cfg.json").string(), "--out-dir", (dir / "other").string(),
                               "--format", "csv"});
    REQUIRE(flag.code == cli::kOk);
    CHECK(fs::exists(dir / "other" / "couple.txt"));

    j["format"] = "yaml";
    CHECK_THROWS_AS(parse_config(j), ValidationError);
  }

  TEST_CASE("output is deterministic and written atomically") {
    const auto dir = scratch_dir("out");
    const std::vector<std::string> args{"sweep-freq", config("reference_link.json"), "--out-dir", dir.string()};
    REQUIRE(run_cli(args).code == cli::kOk);
    std::ifstream first(dir / "sweep_freq.csv");
    const std::string a((std::istreambuf_iterator<char>(first)), {});
    REQUIRE(run_cli(args).code == cli::kOk);
    std::ifstream second(dir / "sweep_freq.csv");
    const std::string b((std::istreambuf_iterator<char>(second)), {});
    CHECK(a == b);
    CHECK(std::count(a.begin(), a.end(), '\n') == 402);
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");

    REQUIRE(run_cli({"field-map", config("reference_link.json"), "--out-dir", dir.string()}).code == cli::kOk);
    CHECK(fs::exists(dir / "field_map.csv"));
    CHECK(fs::exists(dir / "field_map_summary.json"));
  }

  TEST_CASE("fit and design subcommands") {
    const auto fit = run_cli({"fit", config("reference_link.json")});
    REQUIRE(fit.code == cli::kOk);
    const auto f = json::parse(fit.out)["link_fit"];
    CHECK(f["model_p_load_W"].get<double>() == Approx(0.7728).epsilon(1e-3));
    CHECK(f["model_efficiency"].get<double>() == Approx(0.3879).epsilon(1e-3));

    const auto design = run_cli({"design", config("reference_link.json")});
    REQUIRE(design.code == cli::kOk);
    const auto d = json::parse(design.out);
    CHECK(d["coil"]["turns"].get<int>() == 8);
    CHECK(d["resonant_capacitor_nF"].get<double>() == Approx(1.8).epsilon(2e-3));

    CHECK(run_cli({"design", config("reference_link_fitted_esr.json")}).code == cli::kFailure);
  }
}
