#pragma once

#include <string>
#include <vector>

#include "drlab/evolution.hpp"

namespace drlab {

/// Built-in specs: example11, delta0, subcrit-sample, supercrit-sample and
/// alpha-family:ALPHA:K (also written alpha-family(ALPHA,K)), all with m = 2.
SystemSpec preset(const std::string& name, Mode mode = Mode::Rational);
std::vector<std::string> preset_names();

/// Law proportional to k^-alpha 2^-k on 1..K, made critical for m.
std::map<long, Rational> alpha_shape(long alpha, long K);

} // namespace drlab
