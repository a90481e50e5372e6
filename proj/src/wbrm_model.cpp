#include "wbrm/wbrm_model.hpp"

#include <nlohmann/json.hpp>

#include "wbrm/errors.hpp"
#include "wbrm/rng.hpp"

namespace wbrm {

WbrmInstance generate_wbrm(int n, int b, double lambda, std::uint64_t seed) {
    if (n < 2) throw ValidationError("generate_wbrm: n must be >= 2");
    if (b < 1 || b >= n) throw ValidationError("generate_wbrm: need 1 <= b < n");
    if (!(lambda >= 0.0)) throw ValidationError("generate_wbrm: lambda must be >= 0");

    WbrmInstance inst;
    inst.n = n;
    inst.b = b;
    inst.lambda = lambda;
    inst.seed = seed;
    inst.v = BandedSymmetricMatrix(n, b);
    // Counter d*n + (i-1) is unique per band element (i < n - d + 1 <= n).
    for (int d = 1; d <= b; ++d) {
        const std::uint64_t base = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(n);
        for (int i = 1; i <= n - d; ++i)
            inst.v.band(d, i) = normal_at(seed, base + static_cast<std::uint64_t>(i - 1));
    }
    return inst;
}

BandedSymmetricMatrix hamiltonian(const WbrmInstance& inst) {
    BandedSymmetricMatrix h(inst.n, inst.b);
    for (int i = 1; i <= inst.n; ++i) h.diag(i) = static_cast<double>(i);
    for (int d = 1; d <= inst.b; ++d)
        for (int i = 1; i <= inst.n - d; ++i) h.band(d, i) = inst.lambda * inst.v.band(d, i);
    return h;
}

std::string instance_to_json(const WbrmInstance& inst) {
    nlohmann::json j;
    j["n"] = inst.n;
    j["b"] = inst.b;
    j["lambda"] = inst.lambda;
    j["seed"] = inst.seed;
    return j.dump();
}

WbrmInstance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("instance json: ") + e.what());
    }
    for (const auto& key : {"n", "b", "lambda", "seed"})
        if (!j.contains(key)) throw ValidationError(std::string("instance json: missing key ") + key);
    return generate_wbrm(j["n"].get<int>(), j["b"].get<int>(), j["lambda"].get<double>(),
                         j["seed"].get<std::uint64_t>());
}

}  // namespace wbrm
