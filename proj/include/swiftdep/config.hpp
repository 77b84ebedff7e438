#pragma once

#include <map>
#include <string>

#include "swiftdep/scorer.hpp"

namespace swiftdep {

// Flat key=value lines; blank lines and '#' comments ignored; later
// duplicates win. Throws ParseError with a line number on malformed
// lines.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Applies the recognized trainer keys (lr0, beta1, beta2, epsilon,
// batch_size, epochs, anneal_factor, anneal_start, anneal_every,
// dropout_prob, unk_replace_prob, seed, word_dim, pos_dim, window) and
// rejects unknown keys or unparsable values.
void apply_trainer_config(const std::map<std::string, std::string>& kv, TrainerConfig& cfg);

}  // namespace swiftdep
