#include <cmath>
#include <mutex>

#include "memstefan/fraccalc.hpp"

namespace memstefan::frac {

namespace {

// (1 + x)^p - 1 without cancellation for small x.
double pow1p_minus_one(double x, double p) {
    return std::expm1(p * std::log1p(x));
}

std::shared_ptr<const KernelWeights> build(double beta, std::size_t nodes) {
    auto w = std::make_shared<KernelWeights>();
    w->beta = beta;
    const double p = beta + 1.0;
    w->interior.resize(nodes);
    w->first.resize(nodes);
    w->interior[0] = 1.0;
    w->first[0] = 0.0;
    for (std::size_t k = 1; k < nodes; ++k) {
        const double kd = static_cast<double>(k);
        const double inv = 1.0 / kd;
        const double scale = std::pow(kd, p);
        // Second difference of x^p around k, evaluated relative to k^p.
        w->interior[k] = scale * (pow1p_minus_one(inv, p) + pow1p_minus_one(-inv, p));
        // (k-1)^p - (k-1-beta) k^beta = k^p [(1 - 1/k)^p - (1 - p/k)].
        w->first[k] = scale * (pow1p_minus_one(-inv, p) + p * inv);
    }
    if (beta < 1.0) {
        const double q = 1.0 - beta;
        w->l1.resize(nodes);
        w->l1[0] = 1.0;
        for (std::size_t k = 1; k < nodes; ++k) {
            const double kd = static_cast<double>(k);
            w->l1[k] = std::pow(kd, q) * pow1p_minus_one(1.0 / kd, q);
        }
    }
    return w;
}

} // namespace

WeightCache& WeightCache::instance() {
    static WeightCache cache;
    return cache;
}

std::shared_ptr<const KernelWeights> WeightCache::get(double beta, std::size_t nodes) {
    {
        std::shared_lock lock(mutex_);
        auto it = table_.find(beta);
        if (it != table_.end() && it->second->capacity() >= nodes) {
            return it->second;
        }
    }
    std::unique_lock lock(mutex_);
    auto it = table_.find(beta);
    if (it != table_.end() && it->second->capacity() >= nodes) {
        return it->second;
    }
    // Grow geometrically so that a sweep of increasing lengths stays O(N).
    std::size_t capacity = nodes;
    if (it != table_.end()) {
        capacity = std::max(nodes, 2 * it->second->capacity());
    }
    auto weights = build(beta, capacity);
    table_[beta] = weights;
    return weights;
}

std::size_t WeightCache::entries() const {
    std::shared_lock lock(mutex_);
    return table_.size();
}

void WeightCache::clear() {
    std::unique_lock lock(mutex_);
    table_.clear();
}

} // namespace memstefan::frac
