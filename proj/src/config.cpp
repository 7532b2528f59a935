#include "qrc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qrc {

using nlohmann::json;

std::string ReservoirSpec::label() const {
    if (!statistics.is_boson()) return statistics.name();
    return "boson_c" + std::to_string(statistics.cutoff) + "_e" + std::to_string(excitation);
}

int ExperimentConfig::washout_for(const ReservoirSpec& r) const {
    if (washout >= 0) return washout;
    return r.statistics.is_fermion() ? 3000 : 1000;
}

int ExperimentConfig::train_for() const {
    if (train_length >= 0) return train_length;
    return virtual_nodes >= 3 ? 2000 : 1200;
}

int ExperimentConfig::test_for() const {
    if (test_length >= 0) return test_length;
    return virtual_nodes >= 3 ? 500 : 300;
}

namespace {

const std::set<std::string> kKnownKeys{
    "statistics",      "cutoff",          "excitation",     "n_sites",          "dt",
    "virtual_nodes",   "observables",     "include_diagonal", "encoding",       "train_length",
    "test_length",     "washout",         "seeds",          "delays",           "degrees",
    "ridge",           "output",          "threads",        "allow_low_cutoff", "steps",
    "converge_a",      "converge_b",      "chain_sites",    "chain_pairs",      "spread_step",
    "ipc_length",      "ipc",             "spectrum_inputs", "spectrum_moduli", "spectrum_full",
    "trace_observables", "debug_fail_seeds"};

template <typename T>
T get(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

ReservoirSpec reservoir_from(const json& entry, const json& top) {
    std::string name;
    int cutoff = -1;
    int excitation = get<int>(top, "excitation", 1);
    if (entry.is_string()) {
        name = entry.get<std::string>();
        cutoff = get<int>(top, "cutoff", -1);
    } else if (entry.is_object()) {
        name = get<std::string>(entry, "statistics", "");
        cutoff = get<int>(entry, "cutoff", get<int>(top, "cutoff", -1));
        excitation = get<int>(entry, "excitation", excitation);
    } else {
        throw ConfigError("'statistics' entries must be names or objects");
    }
    ReservoirSpec r;
    r.excitation = excitation;
    try {
        if (name == "boson" || name == "bosons") {
            r.statistics = Statistics::boson(cutoff >= 0 ? cutoff : recommended_cutoff(std::max(excitation, 1)));
        } else {
            r.statistics = Statistics::parse(name);
        }
    } catch (const std::exception& e) {
        throw ConfigError(std::string("'statistics': ") + e.what());
    }
    return r;
}

std::vector<ObservableKind> kinds_from(const json& j, const char* key, std::vector<ObservableKind> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<std::string> names;
    if (j.at(key).is_string()) {
        names.push_back(j.at(key).get<std::string>());
    } else {
        names = get<std::vector<std::string>>(j, key, {});
    }
    std::vector<ObservableKind> out;
    for (const auto& n : names) {
        if (n == "all") {
            auto all = all_observable_kinds();
            out.insert(out.end(), all.begin(), all.end());
            continue;
        }
        try {
            out.push_back(parse_observable_kind(n));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("'") + key + "': " + e.what());
        }
    }
    return out;
}

std::vector<std::uint64_t> seeds_from(const json& j) {
    if (!j.contains("seeds")) return parse_seeds("1..100");
    const json& s = j.at("seeds");
    if (s.is_string()) return parse_seeds(s.get<std::string>());
    if (s.is_number_unsigned() || s.is_number_integer()) return {s.get<std::uint64_t>()};
    if (s.is_array()) {
        std::vector<std::uint64_t> out;
        for (const json& v : s) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("'seeds': entries must be non-negative integers");
            out.push_back(v.get<std::uint64_t>());
        }
        return out;
    }
    throw ConfigError("'seeds' must be \"A..B\", a list, or an integer");
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    auto to_u64 = [&](const std::string& s) -> std::uint64_t {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            if (s.empty() || s[0] == '-') throw std::invalid_argument("negative");
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("invalid seed '" + s + "' in '" + text + "'");
        }
        if (used != s.size()) throw ConfigError("invalid seed '" + s + "' in '" + text + "'");
        return v;
    };
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t a = to_u64(text.substr(0, dots));
        const std::uint64_t b = to_u64(text.substr(dots + 2));
        if (b < a) throw ConfigError("seed range '" + text + "' is empty");
        if (b - a >= 10000000) throw ConfigError("seed range '" + text + "' is unreasonably large");
        for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_u64(item));
    if (out.empty()) throw ConfigError("empty seed list");
    return out;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    ExperimentConfig c;
    if (j.contains("statistics")) {
        c.reservoirs.clear();
        const json& s = j.at("statistics");
        if (s.is_array()) {
            for (const json& e : s) c.reservoirs.push_back(reservoir_from(e, j));
        } else {
            c.reservoirs.push_back(reservoir_from(s, j));
        }
    } else {
        c.reservoirs = {reservoir_from(json("qubit"), j)};
    }
    c.n_sites = get<int>(j, "n_sites", c.n_sites);
    c.dt = get<double>(j, "dt", c.dt);
    c.virtual_nodes = get<int>(j, "virtual_nodes", c.virtual_nodes);
    c.observables = kinds_from(j, "observables", c.observables);
    c.include_diagonal = get<bool>(j, "include_diagonal", c.include_diagonal);
    if (j.contains("encoding")) {
        try {
            c.encoding = parse_encoding(get<std::string>(j, "encoding", ""));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("'encoding': ") + e.what());
        }
    }
    c.train_length = get<int>(j, "train_length", c.train_length);
    c.test_length = get<int>(j, "test_length", c.test_length);
    c.washout = get<int>(j, "washout", c.washout);
    c.seeds = seeds_from(j);
    c.delays = get<std::vector<int>>(j, "delays", c.delays);
    c.degrees = get<std::vector<int>>(j, "degrees", c.degrees);
    c.ridge = get<double>(j, "ridge", c.ridge);
    c.output = get<std::string>(j, "output", c.output);
    c.threads = get<int>(j, "threads", c.threads);
    c.allow_low_cutoff = get<bool>(j, "allow_low_cutoff", c.allow_low_cutoff);
    c.steps = get<int>(j, "steps", c.steps);
    // Default pair: one excitation on site 2 versus one on site 3 (site 1
    // when there are only two sites).
    if (c.n_sites >= 2) {
        c.converge_a.assign(static_cast<std::size_t>(c.n_sites), 0);
        c.converge_b.assign(static_cast<std::size_t>(c.n_sites), 0);
        c.converge_a[1] = 1;
        c.converge_b[c.n_sites >= 3 ? 2 : 0] = 1;
    }
    c.converge_a = get<std::vector<int>>(j, "converge_a", c.converge_a);
    c.converge_b = get<std::vector<int>>(j, "converge_b", c.converge_b);
    c.chain_sites = get<int>(j, "chain_sites", c.chain_sites);
    c.chain_pairs = get<std::vector<std::pair<int, int>>>(j, "chain_pairs", c.chain_pairs);
    c.spread_step = get<int>(j, "spread_step", c.spread_step);
    c.ipc_length = get<int>(j, "ipc_length", c.ipc_length);
    if (j.contains("ipc")) {
        const json& ipc = j.at("ipc");
        if (!ipc.is_object()) throw ConfigError("'ipc' must be an object");
        for (const auto& [key, value] : ipc.items()) {
            static const std::set<std::string> known{"max_degree", "window", "surrogates", "percentile", "stop_after"};
            if (!known.contains(key)) throw ConfigError("unknown config key 'ipc." + key + "'");
        }
        c.ipc.max_degree = get<int>(ipc, "max_degree", c.ipc.max_degree);
        c.ipc.window = get<int>(ipc, "window", c.ipc.window);
        c.ipc.surrogates = get<int>(ipc, "surrogates", c.ipc.surrogates);
        c.ipc.percentile = get<double>(ipc, "percentile", c.ipc.percentile);
        c.ipc.stop_after = get<int>(ipc, "stop_after", c.ipc.stop_after);
    }
    c.spectrum_inputs = get<std::vector<double>>(j, "spectrum_inputs", c.spectrum_inputs);
    c.spectrum_moduli = get<bool>(j, "spectrum_moduli", c.spectrum_moduli);
    c.spectrum_full = get<bool>(j, "spectrum_full", c.spectrum_full);
    c.trace_observables = kinds_from(j, "trace_observables", c.trace_observables);
    c.debug_fail_seeds = get<std::vector<std::uint64_t>>(j, "debug_fail_seeds", c.debug_fail_seeds);
    validate(c);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    json stats = json::array();
    for (const ReservoirSpec& r : c.reservoirs) {
        json e{{"statistics", r.statistics.name()}, {"excitation", r.excitation}};
        if (r.statistics.is_boson()) e["cutoff"] = r.statistics.cutoff;
        stats.push_back(e);
    }
    auto kind_names = [](const std::vector<ObservableKind>& kinds) {
        json a = json::array();
        for (ObservableKind k : kinds) a.push_back(observable_kind_name(k));
        return a;
    };
    j["statistics"] = stats;
    j["n_sites"] = c.n_sites;
    j["dt"] = c.dt;
    j["virtual_nodes"] = c.virtual_nodes;
    j["observables"] = kind_names(c.observables);
    j["include_diagonal"] = c.include_diagonal;
    j["encoding"] = encoding_name(c.encoding);
    j["train_length"] = c.train_length;
    j["test_length"] = c.test_length;
    j["washout"] = c.washout;
    j["seeds"] = c.seeds;
    j["delays"] = c.delays;
    j["degrees"] = c.degrees;
    j["ridge"] = c.ridge;
    j["output"] = c.output;
    j["threads"] = c.threads;
    j["allow_low_cutoff"] = c.allow_low_cutoff;
    j["steps"] = c.steps;
    j["converge_a"] = c.converge_a;
    j["converge_b"] = c.converge_b;
    j["chain_sites"] = c.chain_sites;
    j["chain_pairs"] = c.chain_pairs;
    j["spread_step"] = c.spread_step;
    j["ipc_length"] = c.ipc_length;
    j["ipc"] = {{"max_degree", c.ipc.max_degree},
                {"window", c.ipc.window},
                {"surrogates", c.ipc.surrogates},
                {"percentile", c.ipc.percentile},
                {"stop_after", c.ipc.stop_after}};
    j["spectrum_inputs"] = c.spectrum_inputs;
    j["spectrum_moduli"] = c.spectrum_moduli;
    j["spectrum_full"] = c.spectrum_full;
    j["trace_observables"] = kind_names(c.trace_observables);
    j["debug_fail_seeds"] = c.debug_fail_seeds;
    return j;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (c.reservoirs.empty()) fail("'statistics' must name at least one reservoir");
    for (const ReservoirSpec& r : c.reservoirs) {
        if (r.excitation < 1) fail("'excitation' must be >= 1");
        if (!r.statistics.is_boson() && r.excitation != 1) {
            fail(r.statistics.name() + " reservoirs only admit excitation 1 (got " + std::to_string(r.excitation) + ")");
        }
        if (r.statistics.is_boson()) {
            const int cutoff = r.statistics.cutoff;
            if (cutoff < 1) fail("'cutoff' must be >= 1");
            if (r.excitation > cutoff) {
                fail("boson excitation " + std::to_string(r.excitation) + " exceeds cutoff " + std::to_string(cutoff));
            }
            if (!c.allow_low_cutoff && cutoff < recommended_cutoff(r.excitation)) {
                fail("boson excitation " + std::to_string(r.excitation) + " needs cutoff >= " +
                     std::to_string(recommended_cutoff(r.excitation)) + " (got " + std::to_string(cutoff) +
                     "); set allow_low_cutoff to run anyway");
            }
        }
    }
    if (c.n_sites < 2) fail("'n_sites' must be >= 2");
    if (!(c.dt > 0.0)) fail("'dt' must be positive");
    if (c.virtual_nodes < 1) fail("'virtual_nodes' must be >= 1");
    if (c.observables.empty()) fail("'observables' must list at least one kind");
    if (c.washout < -1) fail("'washout' must be >= 0");
    if (c.train_length == 0 || c.train_length < -1 || c.train_for() < 2) fail("'train_length' must be >= 2");
    if (c.test_length == 0 || c.test_length < -1 || c.test_for() < 2) fail("'test_length' must be >= 2");
    if (c.seeds.empty()) fail("'seeds' must not be empty");
    if (c.delays.empty()) fail("'delays' must not be empty");
    for (int d : c.delays) {
        if (d < 0) fail("'delays' must be >= 0");
    }
    for (int q : c.degrees) {
        if (q < 1) fail("'degrees' must be >= 1");
    }
    if (c.ridge < 0.0) fail("'ridge' must be >= 0");
    if (c.threads < 1) fail("'threads' must be >= 1");
    if (c.steps < 1) fail("'steps' must be >= 1");
    if (c.converge_a.size() != static_cast<std::size_t>(c.n_sites) ||
        c.converge_b.size() != static_cast<std::size_t>(c.n_sites)) {
        fail("'converge_a' and 'converge_b' need one occupation per site");
    }
    if (c.chain_sites < 2) fail("'chain_sites' must be >= 2");
    for (const auto& [i, j] : c.chain_pairs) {
        if (i < 1 || j < 1 || i > c.chain_sites || j > c.chain_sites) fail("'chain_pairs' entries must be sites 1..chain_sites");
    }
    if (c.spread_step < 1) fail("'spread_step' must be >= 1");
    if (c.ipc_length < 2) fail("'ipc_length' must be >= 2");
    if (c.ipc.max_degree < 1 || c.ipc.window < 1 || c.ipc.surrogates < 1 || c.ipc.stop_after < 1) {
        fail("'ipc' settings must be positive");
    }
    if (!(c.ipc.percentile > 0.0 && c.ipc.percentile <= 100.0)) fail("'ipc.percentile' must lie in (0, 100]");
    for (double u : c.spectrum_inputs) {
        if (!(u >= 0.0 && u <= 1.0)) fail("'spectrum_inputs' must lie in [0,1]");
    }
    if (c.trace_observables.empty()) fail("'trace_observables' must list at least one kind");
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &j;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        json& next = (*node)[parts[i]];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigError("override '" + key + "' descends into a non-object");
        node = &next;
    }
    (*node)[parts.back()] = value;
}

}  // namespace qrc
