#include "smiledyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace smiledyn {

void MLPConfig::validate() const {
    if (hidden_sizes.empty()) throw Error(ErrorKind::Validation, "hidden_sizes must be nonempty");
    for (int h : hidden_sizes)
        if (h < 1) throw Error(ErrorKind::Validation, "hidden layer sizes must be >= 1");
    if (!(learning_rate > 0.0)) throw Error(ErrorKind::Validation, "learning_rate must be > 0");
    if (epochs < 0) throw Error(ErrorKind::Validation, "epochs must be >= 0");
    if (batch_size < 1) throw Error(ErrorKind::Validation, "batch_size must be >= 1");
}

Mlp Mlp::init(std::vector<int> layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2)
        throw Error(ErrorKind::Analysis, "Mlp::init: need input and output dimensions");
    Mlp net;
    net.dims_ = std::move(layer_dims);
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < net.dims_.size(); ++l) {
        net.w_offset_.push_back(total);
        total += static_cast<std::size_t>(net.dims_[l]) * net.dims_[l + 1];
        net.b_offset_.push_back(total);
        total += static_cast<std::size_t>(net.dims_[l + 1]);
    }
    net.params_.assign(total, 0.0);

    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < net.dims_.size(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[l]));
        double* w = net.params_.data() + net.w_offset_[l];
        const std::size_t count = static_cast<std::size_t>(net.dims_[l]) * net.dims_[l + 1];
        for (std::size_t i = 0; i < count; ++i) w[i] = rng.uniform(-bound, bound);
    }
    return net;
}

double Mlp::forward(std::span<const double> std_inputs) const {
    std::vector<double> act(std_inputs.begin(), std_inputs.end());
    std::vector<double> next;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const int n_in = dims_[l];
        const int n_out = dims_[l + 1];
        const double* w = params_.data() + w_offset_[l];
        const double* b = params_.data() + b_offset_[l];
        next.assign(static_cast<std::size_t>(n_out), 0.0);
        for (int o = 0; o < n_out; ++o) {
            double z = b[o];
            const double* wr = w + static_cast<std::size_t>(o) * n_in;
            for (int i = 0; i < n_in; ++i) z += wr[i] * act[static_cast<std::size_t>(i)];
            const bool last = (l + 2 == dims_.size());
            next[static_cast<std::size_t>(o)] = last ? z : std::max(0.0, z);
        }
        act.swap(next);
    }
    return act[0];
}

double Mlp::predict(std::span<const double> raw_inputs) const {
    if (raw_inputs.size() != static_cast<std::size_t>(dims_.front()))
        throw Error(ErrorKind::Analysis, "predict: input dimension mismatch");
    std::vector<double> std_in(raw_inputs.size());
    for (std::size_t i = 0; i < raw_inputs.size(); ++i)
        std_in[i] = (raw_inputs[i] - input_mean[i]) / input_sd[i];
    double y = target_mean + target_sd * forward(std_in);
    if (clamp_range) y = std::clamp(y, clamp_range->first, clamp_range->second);
    return y;
}

double Mlp::loss_and_gradient(const std::vector<std::vector<double>>& x_std,
                              std::span<const double> y_std, std::vector<double>* grad) const {
    if (x_std.empty() || x_std.size() != y_std.size())
        throw Error(ErrorKind::Analysis, "loss_and_gradient: empty or mismatched batch");
    const std::size_t n_layers = dims_.size() - 1;
    const double inv_n = 1.0 / static_cast<double>(x_std.size());
    if (grad) grad->assign(params_.size(), 0.0);

    // Per-sample forward pass keeping activations, then backprop.
    std::vector<std::vector<double>> acts(n_layers + 1);
    double loss = 0.0;
    for (std::size_t s = 0; s < x_std.size(); ++s) {
        acts[0] = x_std[s];
        for (std::size_t l = 0; l < n_layers; ++l) {
            const int n_in = dims_[l];
            const int n_out = dims_[l + 1];
            const double* w = params_.data() + w_offset_[l];
            const double* b = params_.data() + b_offset_[l];
            auto& out = acts[l + 1];
            out.assign(static_cast<std::size_t>(n_out), 0.0);
            for (int o = 0; o < n_out; ++o) {
                double z = b[o];
                const double* wr = w + static_cast<std::size_t>(o) * n_in;
                for (int i = 0; i < n_in; ++i) z += wr[i] * acts[l][static_cast<std::size_t>(i)];
                out[static_cast<std::size_t>(o)] = (l + 1 == n_layers) ? z : std::max(0.0, z);
            }
        }
        const double err = acts[n_layers][0] - y_std[s];
        loss += err * err * inv_n;
        if (!grad) continue;

        std::vector<double> delta{2.0 * err * inv_n};
        for (std::size_t l = n_layers; l-- > 0;) {
            const int n_in = dims_[l];
            const int n_out = dims_[l + 1];
            double* gw = grad->data() + w_offset_[l];
            double* gb = grad->data() + b_offset_[l];
            const double* w = params_.data() + w_offset_[l];
            std::vector<double> delta_prev(static_cast<std::size_t>(n_in), 0.0);
            for (int o = 0; o < n_out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                if (d == 0.0) continue;
                gb[o] += d;
                double* gwr = gw + static_cast<std::size_t>(o) * n_in;
                const double* wr = w + static_cast<std::size_t>(o) * n_in;
                for (int i = 0; i < n_in; ++i) {
                    gwr[i] += d * acts[l][static_cast<std::size_t>(i)];
                    delta_prev[static_cast<std::size_t>(i)] += d * wr[i];
                }
            }
            if (l > 0) {
                // Rectifier derivative uses the stored activation (> 0 iff active).
                for (int i = 0; i < n_in; ++i)
                    if (acts[l][static_cast<std::size_t>(i)] <= 0.0)
                        delta_prev[static_cast<std::size_t>(i)] = 0.0;
            }
            delta.swap(delta_prev);
        }
    }
    return loss;
}

std::vector<WindowedSample> make_windows(const FeatureTable& table, int w,
                                         const ScaleScore& score) {
    if (w < 1) throw Error(ErrorKind::Validation, "window size must be >= 1");
    std::vector<WindowedSample> samples;
    const int n = table.count();
    for (int start = 0; start + w <= n; ++start) {
        WindowedSample s;
        s.mother_id = table.mother_id;
        s.visit_month = table.visit_month;
        s.window_index = start;
        s.inputs.assign(kAllFeatures.size(), 0.0);
        for (int j = 0; j < w; ++j) {
            const auto fv = feature_vector(table.rows[static_cast<std::size_t>(start + j)].features);
            for (std::size_t c = 0; c < fv.size(); ++c) s.inputs[c] += fv[c];
        }
        for (double& v : s.inputs) v /= w;
        s.target = static_cast<double>(score.value);
        samples.push_back(std::move(s));
    }
    return samples;
}

std::vector<WindowedSample> corpus_windows(const Corpus& corpus, ScaleKind scale, int w,
                                           bool with_position) {
    std::vector<WindowedSample> samples;
    for (const FeatureTable& table : corpus.sessions) {
        const ScoreTableRow* score = corpus.score_for(table);
        if (!score) continue;
        auto session_samples = make_windows(table, w, ScaleScore{scale, score->value(scale)});
        for (auto& s : session_samples) {
            if (with_position) s.inputs.push_back(static_cast<double>(s.window_index));
            samples.push_back(std::move(s));
        }
    }
    return samples;
}

SplitResult split_by_mother(std::vector<std::string> mothers, std::uint64_t seed) {
    std::sort(mothers.begin(), mothers.end());
    mothers.erase(std::unique(mothers.begin(), mothers.end()), mothers.end());
    if (mothers.size() < 2)
        throw Error(ErrorKind::Analysis, "split_by_mother: need at least 2 mothers");

    Rng rng(seed);
    rng.shuffle(mothers);

    const double train_fraction = 75.0 / 94.0;
    const auto n = static_cast<double>(mothers.size());
    auto n_train = static_cast<std::size_t>(std::llround(n * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, mothers.size() - 1);

    SplitResult split;
    split.train_mothers.assign(mothers.begin(), mothers.begin() + static_cast<long>(n_train));
    split.test_mothers.assign(mothers.begin() + static_cast<long>(n_train), mothers.end());
    std::sort(split.train_mothers.begin(), split.train_mothers.end());
    std::sort(split.test_mothers.begin(), split.test_mothers.end());
    return split;
}

Mlp train_mlp(std::span<const WindowedSample> samples, const MLPConfig& cfg) {
    cfg.validate();
    if (samples.empty()) throw Error(ErrorKind::Analysis, "train_mlp: empty training set");
    const std::size_t dim = samples[0].inputs.size();
    for (const auto& s : samples)
        if (s.inputs.size() != dim)
            throw Error(ErrorKind::Analysis, "train_mlp: inconsistent input dimensions");

    // Standardization statistics from the training set.
    std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
    for (const auto& s : samples)
        for (std::size_t i = 0; i < dim; ++i) mean[i] += s.inputs[i];
    for (double& m : mean) m /= static_cast<double>(samples.size());
    for (const auto& s : samples)
        for (std::size_t i = 0; i < dim; ++i)
            sd[i] += (s.inputs[i] - mean[i]) * (s.inputs[i] - mean[i]);
    for (double& v : sd) {
        v = std::sqrt(v / static_cast<double>(samples.size()));
        if (v < 1e-12) v = 1.0;  // constant coordinate: center only
    }

    double y_mean = 0.0, y_sd = 1.0;
    if (cfg.standardize_targets) {
        y_mean = 0.0;
        for (const auto& s : samples) y_mean += s.target;
        y_mean /= static_cast<double>(samples.size());
        double acc = 0.0;
        for (const auto& s : samples) acc += (s.target - y_mean) * (s.target - y_mean);
        y_sd = std::sqrt(acc / static_cast<double>(samples.size()));
        if (y_sd < 1e-12) y_sd = 1.0;
    }

    std::vector<std::vector<double>> x_std(samples.size());
    std::vector<double> y_std(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        x_std[s].resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            x_std[s][i] = (samples[s].inputs[i] - mean[i]) / sd[i];
        y_std[s] = (samples[s].target - y_mean) / y_sd;
    }

    std::vector<int> dims;
    dims.push_back(static_cast<int>(dim));
    dims.insert(dims.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
    dims.push_back(1);
    Mlp net = Mlp::init(dims, derive_seed(cfg.seed, hash_label("init")));
    net.input_mean = std::move(mean);
    net.input_sd = std::move(sd);
    net.target_mean = y_mean;
    net.target_sd = y_sd;

    auto& params = net.parameters();
    std::vector<double> m(params.size(), 0.0), v(params.size(), 0.0), grad;
    Rng shuffle_rng(derive_seed(cfg.seed, hash_label("shuffle")));
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    long step = 0;
    std::vector<std::vector<double>> bx;
    std::vector<double> by;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            bx.assign(end - begin, {});
            by.assign(end - begin, 0.0);
            for (std::size_t i = begin; i < end; ++i) {
                bx[i - begin] = x_std[order[i]];
                by[i - begin] = y_std[order[i]];
            }
            net.loss_and_gradient(bx, by, &grad);
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < params.size(); ++i) {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
                params[i] -= cfg.learning_rate * (m[i] / bc1) /
                             (std::sqrt(v[i] / bc2) + cfg.adam_epsilon);
            }
        }
    }
    return net;
}

std::pair<double, double> evaluate(const Mlp& model, std::span<const WindowedSample> samples) {
    if (samples.empty()) throw Error(ErrorKind::Analysis, "evaluate: no samples");
    double abs_sum = 0.0, sq_sum = 0.0;
    for (const auto& s : samples) {
        const double err = model.predict(s.inputs) - s.target;
        abs_sum += std::fabs(err);
        sq_sum += err * err;
    }
    const double n = static_cast<double>(samples.size());
    return {abs_sum / n, std::sqrt(sq_sum / n)};
}

namespace {

std::vector<std::vector<std::string>> make_folds(std::vector<std::string> mothers, int n_folds,
                                                 std::uint64_t seed) {
    Rng rng(seed);
    rng.shuffle(mothers);
    const int k = std::min<int>(n_folds, static_cast<int>(mothers.size()));
    std::vector<std::vector<std::string>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < mothers.size(); ++i)
        folds[i % static_cast<std::size_t>(k)].push_back(std::move(mothers[i]));
    return folds;
}

std::vector<WindowedSample> filter_by_mothers(std::span<const WindowedSample> samples,
                                              const std::set<std::string>& mothers) {
    std::vector<WindowedSample> out;
    for (const auto& s : samples)
        if (mothers.count(s.mother_id)) out.push_back(s);
    return out;
}

double mse_of(const Mlp& model, std::span<const WindowedSample> samples) {
    double acc = 0.0;
    for (const auto& s : samples) {
        const double err = model.predict(s.inputs) - s.target;
        acc += err * err;
    }
    return acc / static_cast<double>(samples.size());
}

std::uint64_t run_seed(std::uint64_t seed, std::string_view stage, int w, int e, int fold) {
    std::uint64_t t = derive_seed(seed, hash_label(stage));
    t = derive_seed(t, static_cast<std::uint64_t>(w));
    t = derive_seed(t, static_cast<std::uint64_t>(e));
    return derive_seed(t, static_cast<std::uint64_t>(fold));
}

}  // namespace

TrainReport grid_search(const Corpus& corpus, ScaleKind scale, const GridSpec& grid,
                        const MLPConfig& base, std::uint64_t master_seed) {
    if (grid.windows.empty() || grid.epochs.empty() || grid.seeds.empty())
        throw Error(ErrorKind::Analysis, "grid_search: empty grid");
    if (grid.cv_folds < 2) throw Error(ErrorKind::Analysis, "grid_search: need >= 2 CV folds");

    std::vector<std::string> mothers;
    for (const FeatureTable& t : corpus.sessions)
        if (corpus.score_for(t)) mothers.push_back(t.mother_id);
    if (mothers.empty())
        throw Error(ErrorKind::Analysis, "grid_search: no scored sessions for scale '" +
                                             std::string(scale_id(scale)) + "'");

    TrainReport report;
    report.scale = scale;
    report.split = split_by_mother(mothers, derive_seed(master_seed, hash_label("split")));
    const std::set<std::string> train_set(report.split.train_mothers.begin(),
                                          report.split.train_mothers.end());
    const std::set<std::string> test_set(report.split.test_mothers.begin(),
                                         report.split.test_mothers.end());

    // Windowed samples per window size, built once.
    std::vector<std::vector<WindowedSample>> samples_by_window;
    for (int w : grid.windows)
        samples_by_window.push_back(corpus_windows(corpus, scale, w, base.with_position));

    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t wi = 0; wi < grid.windows.size(); ++wi) {
        const int w = grid.windows[wi];
        const auto train_samples = filter_by_mothers(samples_by_window[wi], train_set);
        for (int e : grid.epochs) {
            double cv_sum = 0.0;
            int cv_count = 0;
            for (std::uint64_t seed : grid.seeds) {
                const auto folds = make_folds(report.split.train_mothers, grid.cv_folds,
                                              derive_seed(seed, hash_label("folds")));
                for (std::size_t f = 0; f < folds.size(); ++f) {
                    const std::set<std::string> val_mothers(folds[f].begin(), folds[f].end());
                    std::vector<WindowedSample> fit, val;
                    for (const auto& s : train_samples) {
                        if (val_mothers.count(s.mother_id))
                            val.push_back(s);
                        else
                            fit.push_back(s);
                    }
                    if (fit.empty() || val.empty()) continue;
                    MLPConfig cfg = base;
                    cfg.epochs = e;
                    cfg.seed = run_seed(seed, "cv", w, e, static_cast<int>(f));
                    Mlp model = train_mlp(fit, cfg);
                    if (base.clamp_predictions)
                        model.clamp_range = {static_cast<double>(score_range(scale).lo),
                                             static_cast<double>(score_range(scale).hi)};
                    cv_sum += mse_of(model, val);
                    ++cv_count;
                }
            }
            const double cell =
                cv_count > 0 ? cv_sum / cv_count : std::numeric_limits<double>::infinity();
            report.cv_scores.push_back({w, e, cell});
            if (cell < best_score) {
                best_score = cell;
                report.best_window = w;
                report.best_epochs = e;
            }
        }
    }
    if (!std::isfinite(best_score))
        throw Error(ErrorKind::Analysis,
                    "grid_search: no grid cell produced trainable CV folds");

    // Retrain on all training mothers with each seed; evaluate on the test set.
    const std::size_t best_wi = static_cast<std::size_t>(
        std::find(grid.windows.begin(), grid.windows.end(), report.best_window) -
        grid.windows.begin());
    const auto train_samples = filter_by_mothers(samples_by_window[best_wi], train_set);
    const auto test_samples = filter_by_mothers(samples_by_window[best_wi], test_set);
    if (train_samples.empty())
        throw Error(ErrorKind::Analysis, "grid_search: no training samples at selected window");
    if (test_samples.empty())
        throw Error(ErrorKind::Analysis, "grid_search: no test samples at selected window");

    double mae_sum = 0.0, rmse_sum = 0.0, mae_m_sum = 0.0, rmse_m_sum = 0.0;
    for (std::uint64_t seed : grid.seeds) {
        MLPConfig cfg = base;
        cfg.epochs = report.best_epochs;
        cfg.seed = run_seed(seed, "final", report.best_window, report.best_epochs, 0);
        Mlp model = train_mlp(train_samples, cfg);
        if (base.clamp_predictions)
            model.clamp_range = {static_cast<double>(score_range(scale).lo),
                                 static_cast<double>(score_range(scale).hi)};

        const auto [mae, rmse] = evaluate(model, test_samples);
        mae_sum += mae;
        rmse_sum += rmse;
        report.per_seed_mse.push_back(mse_of(model, test_samples));

        // Secondary per-mother metric: mean window prediction per session.
        std::map<std::pair<std::string, int>, std::pair<double, int>> agg;
        std::map<std::pair<std::string, int>, double> target_of;
        for (const auto& s : test_samples) {
            auto& slot = agg[{s.mother_id, s.visit_month}];
            slot.first += model.predict(s.inputs);
            slot.second += 1;
            target_of[{s.mother_id, s.visit_month}] = s.target;
        }
        double abs_sum = 0.0, sq_sum = 0.0;
        for (const auto& [key, slot] : agg) {
            const double err = slot.first / slot.second - target_of[key];
            abs_sum += std::fabs(err);
            sq_sum += err * err;
        }
        const double n_sessions = static_cast<double>(agg.size());
        mae_m_sum += abs_sum / n_sessions;
        rmse_m_sum += std::sqrt(sq_sum / n_sessions);
    }
    const double n_seeds = static_cast<double>(grid.seeds.size());
    report.mae = mae_sum / n_seeds;
    report.rmse = rmse_sum / n_seeds;
    report.mae_mother = mae_m_sum / n_seeds;
    report.rmse_mother = rmse_m_sum / n_seeds;
    return report;
}

}  // namespace smiledyn
