#include "drlab/presets.hpp"

#include <regex>

namespace drlab {

std::map<long, Rational> alpha_shape(long alpha, long K) {
    if (alpha < 0 || K < 1) throw ConfigError("alpha-family needs alpha >= 0 and K >= 1");
    std::map<long, Rational> shape;
    for (long k = 1; k <= K; ++k) {
        mpz_class den = 1;
        mpz_class kk = k;
        for (long a = 0; a < alpha; ++a) den *= kk;
        den <<= static_cast<mp_bitcnt_t>(k);
        shape[k] = Rational(mpz_class(1), den);
        shape[k].canonicalize();
    }
    return shape;
}

SystemSpec preset(const std::string& name, Mode mode) {
    if (name == "example11") return make_spec(2, {{0, Rational(4, 5)}, {2, Rational(1, 5)}}, mode, name);
    if (name == "delta0") return make_spec(2, {{0, Rational(1)}}, mode, name);
    if (name == "subcrit-sample") return make_spec(2, {{0, Rational(49, 50)}, {2, Rational(1, 50)}}, mode, name);
    if (name == "supercrit-sample") return make_spec(2, {{0, Rational(3, 4)}, {2, Rational(1, 4)}}, mode, name);
    static const std::regex alpha_re(R"(alpha-family[:(]\s*(\d+)\s*[:,]\s*(\d+)\s*\)?)");
    std::smatch mt;
    if (std::regex_match(name, mt, alpha_re)) {
        const long alpha = std::stol(mt[1]);
        const long K = std::stol(mt[2]);
        auto law = make_critical(alpha_shape(alpha, K), 2);
        return make_spec(2, std::move(law), mode, "alpha-family:" + mt[1].str() + ":" + mt[2].str());
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"example11", "delta0", "subcrit-sample", "supercrit-sample", "alpha-family:ALPHA:K"};
}

} // namespace drlab
