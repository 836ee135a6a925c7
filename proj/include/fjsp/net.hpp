#pragma once
#include <span>
#include <vector>

#include "fjsp/rng.hpp"

namespace fjsp {

// One-hidden-layer perceptron, ReLU activation, double precision throughout.
// The same shape serves as parameter storage and as gradient accumulator.
struct Mlp {
    int in = 0;
    int hidden = 0;
    int out = 0;
    std::vector<double> w1;  // hidden x in, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // out x hidden, row-major
    std::vector<double> b2;  // out

    static Mlp zeros(int in, int hidden, int out);
    // uniform init in +-1/sqrt(fan_in)
    static Mlp init(int in, int hidden, int out, Rng& rng);

    int param_count() const { return static_cast<int>(w1.size() + b1.size() + w2.size() + b2.size()); }
    double& param_at(int i);
    double param_at(int i) const;
    void fill(double value);
    void add_scaled(const Mlp& other, double scale);
    bool all_finite() const;
};

struct FwdCache {
    std::vector<double> input;
    std::vector<double> hidden;  // post-ReLU
    std::vector<double> output;  // raw (logits / value)
};

void forward(const Mlp& net, std::span<const double> input, FwdCache& cache);
std::vector<double> softmax(std::span<const double> logits);

// policy head: softmax(MLP(state)); throws AgentError on dimension mismatch
std::vector<double> policy_probs(const Mlp& net, std::span<const double> state);
double value_of(const Mlp& net, std::span<const double> state);

// Given d loss / d output, accumulates parameter gradients into `grad`.
void backward(const Mlp& net, const FwdCache& cache, std::span<const double> d_output, Mlp& grad);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState for_net(const Mlp& net);
    void step(Mlp& net, const Mlp& grad, double lr);
};

}  // namespace fjsp
