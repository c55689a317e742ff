#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rlcore/agent.hpp"
#include "rlcore/checkpoint.hpp"
#include "test_util.hpp"

using namespace rlcore;
using namespace rlcore::testutil;
namespace fs = std::filesystem;

namespace {
std::string temp_path(const char* name) {
    return (fs::temp_directory_path() / name).string();
}
} // namespace

TEST_CASE("checkpoint: tensor round trip preserves names, dims and f32 payload") {
    std::vector<NamedTensor> tensors;
    tensors.push_back({"policy.layer1.weight", {2, 3}, {1.5f, -2.0f, 0.25f, 4.0f, 5.0f, -6.5f}});
    tensors.push_back({"policy.layer1.bias", {2}, {0.125f, 7.0f}});
    const std::string path = temp_path("rlcore_test_roundtrip.ckpt");
    write_checkpoint(path, tensors);

    const auto back = read_checkpoint(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].name == "policy.layer1.weight");
    CHECK(back[0].dims == std::vector<std::uint32_t>{2, 3});
    for (std::size_t i = 0; i < 6; ++i) CHECK(back[0].values[i] == tensors[0].values[i]);
    CHECK(back[1].name == "policy.layer1.bias");
    std::remove(path.c_str());
}

TEST_CASE("checkpoint: header layout is exactly magic/version/count") {
    const std::string path = temp_path("rlcore_test_header.ckpt");
    write_checkpoint(path, {});
    std::ifstream is(path, std::ios::binary);
    char head[16];
    is.read(head, 16);
    CHECK(std::string(head, 8) == "D2RLCKPT");
    // version 1, little endian
    CHECK(static_cast<unsigned char>(head[8]) == 1);
    CHECK(head[9] == 0);
    CHECK(head[10] == 0);
    CHECK(head[11] == 0);
    // tensor count 0
    CHECK(head[12] == 0);
    std::remove(path.c_str());
}

TEST_CASE("checkpoint: bad magic and bad version are IoErrors") {
    const std::string path = temp_path("rlcore_test_bad.ckpt");
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOTMAGIC" << std::string(8, '\0');
    }
    CHECK_THROWS_AS(read_checkpoint(path), IoError);
    {
        std::ofstream os(path, std::ios::binary);
        os << "D2RLCKPT";
        const std::uint32_t version = 999, count = 0;
        os.write(reinterpret_cast<const char*>(&version), 4);
        os.write(reinterpret_cast<const char*>(&count), 4);
    }
    CHECK_THROWS_AS(read_checkpoint(path), IoError);
    CHECK_THROWS_AS(read_checkpoint(temp_path("rlcore_no_such_file.ckpt")), IoError);
    std::remove(path.c_str());
}

TEST_CASE("agent checkpoint: save/load forward agreement within f32 quantization") {
    Rng rng(42);
    AgentConfig cfg;
    cfg.policy_topology.hidden_dim = 16;
    cfg.policy_topology.num_hidden_layers = 3;
    cfg.critic_topology.hidden_dim = 16;
    cfg.critic_topology.num_hidden_layers = 3;
    Agent agent = make_agent(cfg, 3, 1, rng);

    const std::string path = temp_path("rlcore_test_agent.ckpt");
    save_agent_checkpoint(path, agent);
    Agent loaded = load_agent_checkpoint(path);

    CHECK(loaded.obs_dim == 3);
    CHECK(loaded.action_dim == 1);
    CHECK(loaded.critics.size() == agent.critics.size());
    CHECK(loaded.policy.topology() == agent.policy.topology());

    Tensor2D obs(32, 3);
    randomize(obs, rng);
    PolicyOutput a = agent.policy.forward_policy(obs);
    PolicyOutput b = loaded.policy.forward_policy(obs);
    for (std::size_t i = 0; i < a.mean.size(); ++i)
        CHECK(std::fabs(a.mean.data[i] - b.mean.data[i]) <= 1e-6);

    Tensor2D sa(32, 4);
    randomize(sa, rng);
    Tensor2D qa = agent.critics[0].forward_q(sa);
    Tensor2D qb = loaded.critics[0].forward_q(sa);
    for (std::size_t i = 0; i < qa.size(); ++i)
        CHECK(std::fabs(qa.data[i] - qb.data[i]) <= 1e-6);

    // loading twice is exact: the stored f32 values rebuild identical doubles
    save_agent_checkpoint(path, loaded);
    Agent again = load_agent_checkpoint(path);
    CHECK(max_param_delta(again.policy, loaded.policy) == 0.0);

    // target networks equal online networks after load
    CHECK(max_param_delta(loaded.target_critics[0], loaded.critics[0]) == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("agent checkpoint: names follow the policy./q1./q2. scheme") {
    Rng rng(7);
    AgentConfig cfg;
    cfg.policy_topology.hidden_dim = 4;
    cfg.policy_topology.num_hidden_layers = 2;
    cfg.critic_topology.hidden_dim = 4;
    cfg.critic_topology.num_hidden_layers = 2;
    Agent agent = make_agent(cfg, 2, 1, rng);
    const std::string path = temp_path("rlcore_test_names.ckpt");
    save_agent_checkpoint(path, agent);
    const auto tensors = read_checkpoint(path);
    auto has = [&](const std::string& name) {
        for (const auto& t : tensors)
            if (t.name == name) return true;
        return false;
    };
    CHECK(has("policy.layer1.weight"));
    CHECK(has("policy.layer2.bias"));
    CHECK(has("policy.mean.weight"));
    CHECK(has("policy.logstd.weight"));
    CHECK(has("q1.layer1.weight"));
    CHECK(has("q1.head.bias"));
    CHECK(has("q2.layer2.weight"));
    CHECK(has("log_alpha"));
    CHECK(has("meta"));
    std::remove(path.c_str());
}
