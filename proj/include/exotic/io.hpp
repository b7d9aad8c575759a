#pragma once

// JSON records for tensors, chaos expansions and coefficient arrays.
// Multi-indices are written 1-based; only nonzero stored entries appear.
//
//   SymTensor         {"degree", "dim", "entries": [[[k1..kn], re, im], ...]}
//   FockVector        {"Nmax", "dim", "kernels": [SymTensor, ...]}
//   CoefficientArray  {"degree", "K_a", "entries": [...]}
//   ExoticFock        {"Nmax", "K_a", "kernels": [CoefficientArray, ...]}

#include "exotic/embedding.hpp"
#include "exotic/fock_space.hpp"
#include "exotic/symmetric_tensor.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace exotic {

using json = nlohmann::json;

namespace detail {

inline json entries_to_json(const SymTensor& t)
{
    json entries = json::array();
    t.for_each([&](const MultiIndex& idx, cplx v) {
        if (v == cplx{}) return;
        json k = json::array();
        for (auto i : idx) k.push_back(i + 1);
        entries.push_back(json::array({k, v.real(), v.imag()}));
    });
    return entries;
}

inline SymTensor entries_from_json(const json& entries, std::size_t degree, std::size_t dim)
{
    SymTensor t(degree, dim);
    std::set<MultiIndex> seen;
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 3) throw std::invalid_argument("tensor entry must be [multi-index, re, im]");
        MultiIndex idx;
        for (const auto& k : e.at(0)) {
            const auto label = k.get<std::size_t>();
            if (label == 0 || label > dim) throw std::invalid_argument("tensor entry index out of range (1-based)");
            idx.push_back(label - 1);
        }
        if (idx.size() != degree) throw std::invalid_argument("tensor entry index has wrong length");
        std::sort(idx.begin(), idx.end());
        if (!seen.insert(idx).second) throw std::invalid_argument("duplicate tensor entry");
        t.set(idx, {e.at(1).get<double>(), e.at(2).get<double>()});
    }
    return t;
}

} // namespace detail

inline json to_json(const SymTensor& t)
{
    return {{"degree", t.degree()}, {"dim", t.dim()}, {"entries", detail::entries_to_json(t)}};
}

inline SymTensor sym_tensor_from_json(const json& j)
{
    return detail::entries_from_json(j.at("entries"), j.at("degree").get<std::size_t>(), j.at("dim").get<std::size_t>());
}

inline json to_json(const FockVector& v)
{
    json kernels = json::array();
    for (const auto& k : v.kernels()) kernels.push_back(to_json(k));
    return {{"Nmax", v.nmax()}, {"dim", v.dim()}, {"kernels", kernels}};
}

inline FockVector fock_vector_from_json(const json& j)
{
    const auto nmax = j.at("Nmax").get<std::size_t>();
    const auto dim = j.at("dim").get<std::size_t>();
    FockVector v(nmax, dim);
    for (const auto& k : j.at("kernels")) {
        auto t = sym_tensor_from_json(k);
        if (t.dim() != dim) throw std::invalid_argument("FockVector record: kernel dim differs from vector dim");
        const auto n = t.degree();
        v.set_kernel(n, std::move(t));
    }
    return v;
}

inline json to_json(const CoefficientArray& b)
{
    return {{"degree", b.degree()}, {"K_a", b.K_a()}, {"entries", detail::entries_to_json(b.tensor())}};
}

inline CoefficientArray coefficient_array_from_json(const json& j)
{
    return CoefficientArray(
        detail::entries_from_json(j.at("entries"), j.at("degree").get<std::size_t>(), j.at("K_a").get<std::size_t>()));
}

inline json to_json(const ExoticFock& phi)
{
    json kernels = json::array();
    for (std::size_t n = 0; n <= phi.nmax(); ++n) kernels.push_back(to_json(phi.coefficients(n)));
    return {{"Nmax", phi.nmax()}, {"K_a", phi.K_a()}, {"kernels", kernels}};
}

inline ExoticFock exotic_fock_from_json(const json& j)
{
    const auto nmax = j.at("Nmax").get<std::size_t>();
    const auto K_a = j.at("K_a").get<std::size_t>();
    ExoticFock phi(nmax, K_a);
    for (const auto& k : j.at("kernels")) {
        auto b = coefficient_array_from_json(k);
        if (b.K_a() != K_a) throw std::invalid_argument("ExoticFock record: kernel K_a differs");
        const auto n = b.degree();
        phi.set_coefficients(n, b);
    }
    return phi;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

} // namespace exotic
