#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rlcore/config.hpp"
#include "rlcore/csv.hpp"
#include "rlcore/rng.hpp"

using namespace rlcore;

TEST_CASE("config: empty text yields the documented defaults") {
    RunConfig cfg = parse_config_text("");
    CHECK(cfg.env == "pendulum");
    CHECK(cfg.algo == Algo::SAC);
    CHECK(cfg.gamma == 0.99);
    CHECK(cfg.batch_size == 256);
    CHECK(cfg.hidden_dim == 256);
    CHECK(cfg.initial_temperature == 0.1);
    CHECK(cfg.lr_actor == 3e-4);
    CHECK(cfg.lr_alpha == 1e-4);
    CHECK(cfg.eval_episodes == 10);
    CHECK(cfg.arch == TopologyKind::Dense);
    CHECK(cfg.num_layers == 4);
    CHECK(cfg.tau == 0.005);
    CHECK(std::isnan(cfg.target_entropy));
}

TEST_CASE("config: comments, blank lines, whitespace") {
    RunConfig cfg = parse_config_text(
        "# a comment\n"
        "\n"
        "  gamma = 0.95   # trailing comment\n"
        "env=cartpole-swingup\n");
    CHECK(cfg.gamma == 0.95);
    CHECK(cfg.env == "cartpole-swingup");
}

TEST_CASE("config: dense 4-layer selection") {
    RunConfig cfg = parse_config_text("arch = dense\nnum_layers = 4\n");
    AgentConfig a = cfg.agent_config();
    CHECK(a.policy_topology.kind == TopologyKind::Dense);
    CHECK(a.policy_topology.num_hidden_layers == 4);
    CHECK(a.critic_topology.kind == TopologyKind::Dense);
    CHECK(a.critic_topology.num_hidden_layers == 4);
}

TEST_CASE("config: per-network arch keys default to the shared arch") {
    RunConfig cfg = parse_config_text("arch = residual\n");
    CHECK(cfg.policy_arch == TopologyKind::Residual);
    CHECK(cfg.critic_arch == TopologyKind::Residual);

    RunConfig split = parse_config_text("arch = dense\ncritic_arch = vanilla\ncritic_layers = 2\n");
    CHECK(split.policy_arch == TopologyKind::Dense);
    CHECK(split.critic_arch == TopologyKind::Vanilla);
    CHECK(split.policy_layers == 4);
    CHECK(split.critic_layers == 2);
}

TEST_CASE("config: rejection of bad input") {
    CHECK_THROWS_AS(parse_config_text("gamma = 1.5\n"), ConfigError);   // range
    CHECK_THROWS_AS(parse_config_text("gamma = x\n"), ConfigError);     // type
    CHECK_THROWS_AS(parse_config_text("gamma = 0.9\ngamma = 0.8\n"), ConfigError); // duplicate
    CHECK_THROWS_AS(parse_config_text("no_such_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("gamma 0.9\n"), ConfigError);     // missing '='
    CHECK_THROWS_AS(parse_config_text("tau = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("batch_size = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("use_her = yes\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("algo = ppo\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("arch = convnet\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("sweep_axis = num_layers\n"), ConfigError); // missing lists
}

TEST_CASE("config: target_entropy accepts auto or a number") {
    CHECK(std::isnan(parse_config_text("target_entropy = auto\n").target_entropy));
    CHECK(parse_config_text("target_entropy = -2.5\n").target_entropy == -2.5);
}

TEST_CASE("config: resolved text re-parses to an identical config") {
    const std::string source =
        "env = pointmass-goal\n"
        "algo = ddpg\n"
        "seed = 9\n"
        "total_steps = 12345\n"
        "arch = vanilla\n"
        "num_layers = 2\n"
        "hidden_dim = 64\n"
        "use_her = true\n"
        "lr_critic = 0.0007\n"
        "tau = 0.01\n";
    RunConfig cfg = parse_config_text(source);
    const std::string echoed = resolved_config_text(cfg);
    RunConfig cfg2 = parse_config_text(echoed);
    CHECK(resolved_config_text(cfg2) == echoed);
    CHECK(cfg2.agent_config() == cfg.agent_config());
    CHECK(cfg2.env == cfg.env);
    CHECK(cfg2.seed == cfg.seed);
    CHECK(cfg2.total_steps == cfg.total_steps);
}

TEST_CASE("config: sweep keys parse and survive the echo") {
    const std::string source =
        "sweep_axis = num_layers\n"
        "sweep_values = 1,2,4,8\n"
        "sweep_seeds = 1,2,3\n";
    RunConfig cfg = parse_config_text(source);
    CHECK(cfg.sweep_axis == "num_layers");
    CHECK(cfg.sweep_values == std::vector<std::string>{"1", "2", "4", "8"});
    CHECK(cfg.sweep_seeds == std::vector<std::uint64_t>{1, 2, 3});
    RunConfig cfg2 = parse_config_text(resolved_config_text(cfg));
    CHECK(cfg2.sweep_values == cfg.sweep_values);
    CHECK(cfg2.sweep_seeds == cfg.sweep_seeds);

    CHECK_THROWS_AS(parse_config_text("sweep_axis = widths\nsweep_values = 1\nsweep_seeds = 1\n"),
                    ConfigError);
}

TEST_CASE("csv: double formatting is bit-faithful and rows round-trip") {
    CHECK(format_double(0.1) == "0.1");
    const double tricky = 0.1 + 0.2;
    CHECK(std::stod(format_double(tricky)) == tricky);
    CHECK(format_double(tricky) != format_double(0.3)); // distinct doubles stay distinct
    Rng fuzz(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = (fuzz.uniform() - 0.5) * std::pow(10.0, fuzz.uniform(-12, 12));
        CHECK(std::stod(format_double(v)) == v);
    }

    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");

    LearningCurve curve;
    CurveRow row;
    row.env_step = 1000;
    row.eval_return_mean = -123.456789012345;
    row.eval_return_sd = 1.25;
    row.critic_loss = 0.5;
    row.actor_loss = -0.25;
    row.alpha = 0.1;
    row.wall_ms = 42.5;
    curve.rows.push_back(row);

    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "rlcore_test_curve.csv").string();
    write_curve_csv(path, curve);
    LearningCurve back = read_curve_csv(path);
    REQUIRE(back.rows.size() == 1);
    CHECK(back.rows[0].env_step == 1000);
    CHECK(back.rows[0].eval_return_mean == row.eval_return_mean);
    CHECK(back.rows[0].alpha == row.alpha);
    std::remove(path.c_str());
}

TEST_CASE("csv: quoted fields parse under RFC-4180 rules") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "rlcore_test_quoted.csv").string();
    {
        std::ofstream os(path);
        os << "a,b\n\"x,y\",\"he said \"\"ok\"\"\"\n";
    }
    auto rows = read_csv_file(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "x,y");
    CHECK(rows[1][1] == "he said \"ok\"");
    std::remove(path.c_str());
}
