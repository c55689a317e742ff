#include "rlcore/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rlcore/csv.hpp"

namespace rlcore {

TopologyKind parse_topology_kind(const std::string& s) {
    if (s == "vanilla") return TopologyKind::Vanilla;
    if (s == "dense") return TopologyKind::Dense;
    if (s == "residual") return TopologyKind::Residual;
    throw ConfigError("unknown topology kind: '" + s + "' (vanilla|dense|residual)");
}

Algo parse_algo(const std::string& s) {
    if (s == "sac") return Algo::SAC;
    if (s == "td3") return Algo::TD3;
    if (s == "ddpg") return Algo::DDPG;
    throw ConfigError("unknown algorithm: '" + s + "' (sac|td3|ddpg)");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected unsigned integer, got '" + v + "'");
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + key + "': expected true|false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

AgentConfig RunConfig::agent_config() const {
    AgentConfig a;
    a.algo = algo;
    a.lr_actor = lr_actor;
    a.lr_critic = lr_critic;
    a.lr_alpha = lr_alpha;
    a.batch_size = batch_size;
    a.gamma = gamma;
    a.tau = tau;
    a.initial_temperature = initial_temperature;
    a.target_entropy = target_entropy;
    a.learn_alpha = learn_alpha;
    a.single_critic = single_critic;
    a.policy_topology.kind = policy_arch;
    a.policy_topology.hidden_dim = hidden_dim;
    a.policy_topology.num_hidden_layers = policy_layers;
    a.critic_topology.kind = critic_arch;
    a.critic_topology.hidden_dim = hidden_dim;
    a.critic_topology.num_hidden_layers = critic_layers;
    a.td3.policy_noise = policy_noise;
    a.td3.noise_clip = noise_clip;
    a.td3.policy_delay = policy_delay;
    a.td3.exploration_noise = exploration_noise;
    a.warmup_steps = warmup_steps;
    a.eval_interval = eval_interval;
    a.eval_episodes = eval_episodes;
    a.replay_capacity = static_cast<std::size_t>(replay_capacity);
    a.use_her = use_her;
    a.her_k = her_k;
    return a;
}

void RunConfig::validate() const {
    if (total_steps < 1) throw ConfigError("total_steps must be >= 1");
    if (replay_capacity < 1) throw ConfigError("replay_capacity must be >= 1");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    if (num_layers < 1 || policy_layers < 1 || critic_layers < 1)
        throw ConfigError("layer counts must be >= 1");
    if (!sweep_axis.empty()) {
        if (sweep_axis != "num_layers" && sweep_axis != "topology" && sweep_axis != "component")
            throw ConfigError("sweep_axis must be num_layers|topology|component");
        if (sweep_values.empty()) throw ConfigError("sweep_values must be non-empty");
        if (sweep_seeds.empty()) throw ConfigError("sweep_seeds must be non-empty");
    }
    if (sweep_workers < 0) throw ConfigError("sweep_workers must be >= 0");
    agent_config().validate(); // range checks on all shared hyperparameters
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    bool policy_arch_set = false, critic_arch_set = false;
    bool policy_layers_set = false, critic_layers_set = false;

    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!seen.insert(key).second) throw ConfigError("duplicate key: '" + key + "'");

        if (key == "env") cfg.env = value;
        else if (key == "algo") cfg.algo = parse_algo(value);
        else if (key == "seed") cfg.seed = parse_u64(key, value);
        else if (key == "total_steps") cfg.total_steps = parse_long(key, value);
        else if (key == "out") cfg.out_dir = value;
        else if (key == "arch") cfg.arch = parse_topology_kind(value);
        else if (key == "policy_arch") { cfg.policy_arch = parse_topology_kind(value); policy_arch_set = true; }
        else if (key == "critic_arch") { cfg.critic_arch = parse_topology_kind(value); critic_arch_set = true; }
        else if (key == "num_layers") cfg.num_layers = static_cast<int>(parse_long(key, value));
        else if (key == "policy_layers") { cfg.policy_layers = static_cast<int>(parse_long(key, value)); policy_layers_set = true; }
        else if (key == "critic_layers") { cfg.critic_layers = static_cast<int>(parse_long(key, value)); critic_layers_set = true; }
        else if (key == "hidden_dim") cfg.hidden_dim = static_cast<int>(parse_long(key, value));
        else if (key == "lr_actor") cfg.lr_actor = parse_double(key, value);
        else if (key == "lr_critic") cfg.lr_critic = parse_double(key, value);
        else if (key == "lr_alpha") cfg.lr_alpha = parse_double(key, value);
        else if (key == "batch_size") cfg.batch_size = static_cast<int>(parse_long(key, value));
        else if (key == "gamma") cfg.gamma = parse_double(key, value);
        else if (key == "tau") cfg.tau = parse_double(key, value);
        else if (key == "initial_temperature") cfg.initial_temperature = parse_double(key, value);
        else if (key == "target_entropy")
            cfg.target_entropy = value == "auto" ? std::numeric_limits<double>::quiet_NaN()
                                                 : parse_double(key, value);
        else if (key == "learn_alpha") cfg.learn_alpha = parse_bool(key, value);
        else if (key == "single_critic") cfg.single_critic = parse_bool(key, value);
        else if (key == "policy_noise") cfg.policy_noise = parse_double(key, value);
        else if (key == "noise_clip") cfg.noise_clip = parse_double(key, value);
        else if (key == "policy_delay") cfg.policy_delay = static_cast<int>(parse_long(key, value));
        else if (key == "exploration_noise") cfg.exploration_noise = parse_double(key, value);
        else if (key == "warmup_steps") cfg.warmup_steps = static_cast<int>(parse_long(key, value));
        else if (key == "eval_interval") cfg.eval_interval = static_cast<int>(parse_long(key, value));
        else if (key == "eval_episodes") cfg.eval_episodes = static_cast<int>(parse_long(key, value));
        else if (key == "replay_capacity") cfg.replay_capacity = parse_long(key, value);
        else if (key == "use_her") cfg.use_her = parse_bool(key, value);
        else if (key == "her_k") cfg.her_k = static_cast<int>(parse_long(key, value));
        else if (key == "sweep_axis") cfg.sweep_axis = value;
        else if (key == "sweep_values") cfg.sweep_values = split_list(value);
        else if (key == "sweep_seeds") {
            for (const std::string& s : split_list(value))
                cfg.sweep_seeds.push_back(parse_u64(key, s));
        }
        else if (key == "sweep_workers") cfg.sweep_workers = static_cast<int>(parse_long(key, value));
        else throw ConfigError("unknown key: '" + key + "'");
    }

    if (!policy_arch_set) cfg.policy_arch = cfg.arch;
    if (!critic_arch_set) cfg.critic_arch = cfg.arch;
    if (!policy_layers_set) cfg.policy_layers = cfg.num_layers;
    if (!critic_layers_set) cfg.critic_layers = cfg.num_layers;

    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

std::string resolved_config_text(const RunConfig& cfg) {
    std::ostringstream os;
    auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
    kv("env", cfg.env);
    kv("algo", to_string(cfg.algo));
    kv("seed", std::to_string(cfg.seed));
    kv("total_steps", std::to_string(cfg.total_steps));
    kv("out", cfg.out_dir);
    kv("arch", to_string(cfg.arch));
    kv("policy_arch", to_string(cfg.policy_arch));
    kv("critic_arch", to_string(cfg.critic_arch));
    kv("num_layers", std::to_string(cfg.num_layers));
    kv("policy_layers", std::to_string(cfg.policy_layers));
    kv("critic_layers", std::to_string(cfg.critic_layers));
    kv("hidden_dim", std::to_string(cfg.hidden_dim));
    kv("lr_actor", format_double(cfg.lr_actor));
    kv("lr_critic", format_double(cfg.lr_critic));
    kv("lr_alpha", format_double(cfg.lr_alpha));
    kv("batch_size", std::to_string(cfg.batch_size));
    kv("gamma", format_double(cfg.gamma));
    kv("tau", format_double(cfg.tau));
    kv("initial_temperature", format_double(cfg.initial_temperature));
    kv("target_entropy",
       std::isnan(cfg.target_entropy) ? "auto" : format_double(cfg.target_entropy));
    kv("learn_alpha", cfg.learn_alpha ? "true" : "false");
    kv("single_critic", cfg.single_critic ? "true" : "false");
    kv("policy_noise", format_double(cfg.policy_noise));
    kv("noise_clip", format_double(cfg.noise_clip));
    kv("policy_delay", std::to_string(cfg.policy_delay));
    kv("exploration_noise", format_double(cfg.exploration_noise));
    kv("warmup_steps", std::to_string(cfg.warmup_steps));
    kv("eval_interval", std::to_string(cfg.eval_interval));
    kv("eval_episodes", std::to_string(cfg.eval_episodes));
    kv("replay_capacity", std::to_string(cfg.replay_capacity));
    kv("use_her", cfg.use_her ? "true" : "false");
    kv("her_k", std::to_string(cfg.her_k));
    if (!cfg.sweep_axis.empty()) {
        kv("sweep_axis", cfg.sweep_axis);
        std::string vals, seeds;
        for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i)
            vals += (i ? "," : "") + cfg.sweep_values[i];
        for (std::size_t i = 0; i < cfg.sweep_seeds.size(); ++i)
            seeds += (i ? "," : "") + std::to_string(cfg.sweep_seeds[i]);
        kv("sweep_values", vals);
        kv("sweep_seeds", seeds);
        kv("sweep_workers", std::to_string(cfg.sweep_workers));
    }
    return os.str();
}

} // namespace rlcore
