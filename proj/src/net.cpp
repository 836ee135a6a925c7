#include "fjsp/net.hpp"

#include <algorithm>
#include <cmath>

#include "fjsp/errors.hpp"

namespace fjsp {

Mlp Mlp::zeros(int in, int hidden, int out) {
    Mlp net;
    net.in = in;
    net.hidden = hidden;
    net.out = out;
    net.w1.assign(static_cast<size_t>(hidden) * static_cast<size_t>(in), 0.0);
    net.b1.assign(static_cast<size_t>(hidden), 0.0);
    net.w2.assign(static_cast<size_t>(out) * static_cast<size_t>(hidden), 0.0);
    net.b2.assign(static_cast<size_t>(out), 0.0);
    return net;
}

Mlp Mlp::init(int in, int hidden, int out, Rng& rng) {
    Mlp net = zeros(in, hidden, out);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : net.w1) w = rng.uniform(-s1, s1);
    for (double& b : net.b1) b = rng.uniform(-s1, s1);
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (double& w : net.w2) w = rng.uniform(-s2, s2);
    for (double& b : net.b2) b = rng.uniform(-s2, s2);
    return net;
}

double& Mlp::param_at(int i) {
    size_t k = static_cast<size_t>(i);
    if (k < w1.size()) return w1[k];
    k -= w1.size();
    if (k < b1.size()) return b1[k];
    k -= b1.size();
    if (k < w2.size()) return w2[k];
    k -= w2.size();
    return b2[k];
}

double Mlp::param_at(int i) const { return const_cast<Mlp*>(this)->param_at(i); }

void Mlp::fill(double value) {
    std::fill(w1.begin(), w1.end(), value);
    std::fill(b1.begin(), b1.end(), value);
    std::fill(w2.begin(), w2.end(), value);
    std::fill(b2.begin(), b2.end(), value);
}

void Mlp::add_scaled(const Mlp& other, double scale) {
    for (size_t i = 0; i < w1.size(); ++i) w1[i] += scale * other.w1[i];
    for (size_t i = 0; i < b1.size(); ++i) b1[i] += scale * other.b1[i];
    for (size_t i = 0; i < w2.size(); ++i) w2[i] += scale * other.w2[i];
    for (size_t i = 0; i < b2.size(); ++i) b2[i] += scale * other.b2[i];
}

bool Mlp::all_finite() const {
    auto ok = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return ok(w1) && ok(b1) && ok(w2) && ok(b2);
}

void forward(const Mlp& net, std::span<const double> input, FwdCache& cache) {
    if (static_cast<int>(input.size()) != net.in)
        throw AgentError(AgentError::Kind::DimensionMismatch,
                         "input size " + std::to_string(input.size()) + " != net input dim " +
                             std::to_string(net.in));
    cache.input.assign(input.begin(), input.end());
    cache.hidden.assign(static_cast<size_t>(net.hidden), 0.0);
    cache.output.assign(static_cast<size_t>(net.out), 0.0);
    for (int h = 0; h < net.hidden; ++h) {
        double acc = net.b1[static_cast<size_t>(h)];
        const double* row = &net.w1[static_cast<size_t>(h) * static_cast<size_t>(net.in)];
        for (int i = 0; i < net.in; ++i) acc += row[i] * input[static_cast<size_t>(i)];
        cache.hidden[static_cast<size_t>(h)] = acc > 0.0 ? acc : 0.0;
    }
    for (int o = 0; o < net.out; ++o) {
        double acc = net.b2[static_cast<size_t>(o)];
        const double* row = &net.w2[static_cast<size_t>(o) * static_cast<size_t>(net.hidden)];
        for (int h = 0; h < net.hidden; ++h) acc += row[h] * cache.hidden[static_cast<size_t>(h)];
        cache.output[static_cast<size_t>(o)] = acc;
    }
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> probs(logits.size());
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - peak);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::vector<double> policy_probs(const Mlp& net, std::span<const double> state) {
    FwdCache cache;
    forward(net, state, cache);
    return softmax(cache.output);
}

double value_of(const Mlp& net, std::span<const double> state) {
    FwdCache cache;
    forward(net, state, cache);
    return cache.output[0];
}

void backward(const Mlp& net, const FwdCache& cache, std::span<const double> d_output, Mlp& grad) {
    std::vector<double> d_hidden(static_cast<size_t>(net.hidden), 0.0);
    for (int o = 0; o < net.out; ++o) {
        const double g = d_output[static_cast<size_t>(o)];
        if (g == 0.0) continue;
        grad.b2[static_cast<size_t>(o)] += g;
        double* wrow = &grad.w2[static_cast<size_t>(o) * static_cast<size_t>(net.hidden)];
        const double* nrow = &net.w2[static_cast<size_t>(o) * static_cast<size_t>(net.hidden)];
        for (int h = 0; h < net.hidden; ++h) {
            wrow[h] += g * cache.hidden[static_cast<size_t>(h)];
            d_hidden[static_cast<size_t>(h)] += g * nrow[h];
        }
    }
    for (int h = 0; h < net.hidden; ++h) {
        if (cache.hidden[static_cast<size_t>(h)] <= 0.0) continue;  // ReLU gate
        const double g = d_hidden[static_cast<size_t>(h)];
        if (g == 0.0) continue;
        grad.b1[static_cast<size_t>(h)] += g;
        double* wrow = &grad.w1[static_cast<size_t>(h) * static_cast<size_t>(net.in)];
        for (int i = 0; i < net.in; ++i) wrow[i] += g * cache.input[static_cast<size_t>(i)];
    }
}

AdamState AdamState::for_net(const Mlp& net) {
    AdamState state;
    state.m.assign(static_cast<size_t>(net.param_count()), 0.0);
    state.v.assign(static_cast<size_t>(net.param_count()), 0.0);
    return state;
}

void AdamState::step(Mlp& net, const Mlp& grad, double lr) {
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    const int n = net.param_count();
    for (int i = 0; i < n; ++i) {
        const double g = grad.param_at(i);
        m[static_cast<size_t>(i)] = beta1 * m[static_cast<size_t>(i)] + (1.0 - beta1) * g;
        v[static_cast<size_t>(i)] = beta2 * v[static_cast<size_t>(i)] + (1.0 - beta2) * g * g;
        const double m_hat = m[static_cast<size_t>(i)] / bc1;
        const double v_hat = v[static_cast<size_t>(i)] / bc2;
        net.param_at(i) -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

}  // namespace fjsp
