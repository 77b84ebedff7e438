#include "swiftdep/config.hpp"

#include <fstream>
#include <stdexcept>

namespace swiftdep {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno);
        kv[key] = value;
    }
    return kv;
}

void apply_trainer_config(const std::map<std::string, std::string>& kv, TrainerConfig& cfg) {
    for (const auto& [key, value] : kv) {
        try {
            if (key == "lr0") cfg.lr0 = std::stod(value);
            else if (key == "beta1") cfg.beta1 = std::stod(value);
            else if (key == "beta2") cfg.beta2 = std::stod(value);
            else if (key == "epsilon") cfg.epsilon = std::stod(value);
            else if (key == "batch_size") cfg.batch_size = std::stoi(value);
            else if (key == "epochs") cfg.epochs = std::stoi(value);
            else if (key == "anneal_factor") cfg.anneal_factor = std::stod(value);
            else if (key == "anneal_start") cfg.anneal_start = std::stoi(value);
            else if (key == "anneal_every") cfg.anneal_every = std::stoi(value);
            else if (key == "dropout_prob") cfg.dropout_prob = std::stod(value);
            else if (key == "unk_replace_prob") cfg.unk_replace_prob = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "word_dim") cfg.dims.word_dim = std::stoi(value);
            else if (key == "pos_dim") cfg.dims.pos_dim = std::stoi(value);
            else if (key == "window") cfg.dims.window = std::stoi(value);
            else throw ParseError("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ParseError("config key '" + key + "' has unparsable value '" + value + "'");
        } catch (const std::out_of_range&) {
            throw ParseError("config key '" + key + "' has out-of-range value '" + value + "'");
        }
    }
    if (cfg.dropout_prob < 0.0 || cfg.dropout_prob > 1.0 || cfg.unk_replace_prob < 0.0 ||
        cfg.unk_replace_prob > 1.0)
        throw ParseError("config: probabilities must lie in [0, 1]");
    if (cfg.lr0 <= 0.0) throw ParseError("config: lr0 must be positive");
    if (cfg.batch_size < 1 || cfg.epochs < 0 || cfg.anneal_every < 1)
        throw ParseError("config: batch_size and anneal_every must be >= 1, epochs >= 0");
}

}  // namespace swiftdep
