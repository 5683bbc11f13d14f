#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smiledyn/features.hpp"
#include "smiledyn/rng.hpp"
#include "smiledyn/scales.hpp"
#include "smiledyn/stats.hpp"

namespace smiledyn {

/// One sliding-window observation: per-feature means over w consecutive
/// smiles of a session, paired with the mother's questionnaire score.
struct WindowedSample {
    std::string mother_id;
    int visit_month = 6;
    int window_index = 0;  // 0-based
    std::vector<double> inputs;
    double target = 0.0;
};

struct MLPConfig {
    std::vector<int> hidden_sizes{32, 32, 8};
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    int epochs = 100;
    int batch_size = 16;
    std::uint64_t seed = 1;
    bool with_position = false;       // append the window index as an input
    bool standardize_targets = true;  // train on z-scored targets
    bool clamp_predictions = false;   // clamp inference to the scale range

    void validate() const;
};

/// Fully connected network with rectifier hidden layers and a linear output,
/// plus the training-set standardization statistics baked into the model.
class Mlp {
public:
    /// Weight init: uniform in +-1/sqrt(fan_in), biases zero, seeded.
    static Mlp init(std::vector<int> layer_dims, std::uint64_t seed);

    /// Network output for an already standardized input vector.
    double forward(std::span<const double> std_inputs) const;

    /// Full pipeline: standardize, run the net, undo target scaling, clamp.
    double predict(std::span<const double> raw_inputs) const;

    /// Mean squared error over standardized pairs, with the analytic
    /// gradient accumulated into *grad when non-null (same layout as
    /// parameters()). This is the training objective and the surface the
    /// finite-difference gradient check probes.
    double loss_and_gradient(const std::vector<std::vector<double>>& x_std,
                             std::span<const double> y_std, std::vector<double>* grad) const;

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }
    const std::vector<int>& dims() const { return dims_; }

    std::vector<double> input_mean;
    std::vector<double> input_sd;
    double target_mean = 0.0;
    double target_sd = 1.0;
    std::optional<std::pair<double, double>> clamp_range;

private:
    std::vector<int> dims_;        // e.g. {8, 32, 32, 8, 1}
    std::vector<double> params_;   // per layer: W row-major, then b
    std::vector<std::size_t> w_offset_;
    std::vector<std::size_t> b_offset_;
};

/// Sliding windows of length w, stride 1, over consecutive smile ordinals;
/// inputs are per-feature means. Sessions with fewer than w smiles yield
/// nothing.
std::vector<WindowedSample> make_windows(const FeatureTable& table, int w,
                                         const ScaleScore& score);

/// All windowed samples of a corpus for one scale, in session order.
std::vector<WindowedSample> corpus_windows(const Corpus& corpus, ScaleKind scale, int w,
                                           bool with_position);

struct SplitResult {
    std::vector<std::string> train_mothers;
    std::vector<std::string> test_mothers;
};

/// Seeded mother-level split in the study's 75:19 proportion (rounded to
/// nearest, both sides nonempty).
SplitResult split_by_mother(std::vector<std::string> mothers, std::uint64_t seed);

Mlp train_mlp(std::span<const WindowedSample> samples, const MLPConfig& cfg);

/// Window-level (mae, rmse) of model predictions against targets.
std::pair<double, double> evaluate(const Mlp& model, std::span<const WindowedSample> samples);

struct GridSpec {
    std::vector<int> windows{1, 2, 3, 4, 5};
    std::vector<int> epochs{50, 100, 150, 200};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int cv_folds = 5;
};

struct CellScore {
    int window = 0;
    int epochs = 0;
    double mean_cv_mse = 0.0;
};

struct TrainReport {
    ScaleKind scale{};
    int best_window = 0;
    int best_epochs = 0;
    double mae = 0.0;         // window-level, averaged over seeds
    double rmse = 0.0;
    double mae_mother = 0.0;  // per-mother aggregate (mean window prediction)
    double rmse_mother = 0.0;
    std::vector<double> per_seed_mse;
    SplitResult split;
    std::vector<CellScore> cv_scores;
};

/// The full selection protocol: seeded mother split, per-cell k-fold CV
/// across seeds, minimum-mean-MSE cell selection, seeded retraining, and
/// test-set evaluation averaged over seeds.
TrainReport grid_search(const Corpus& corpus, ScaleKind scale, const GridSpec& grid,
                        const MLPConfig& base, std::uint64_t master_seed);

}  // namespace smiledyn
