#include "neurank/config.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "neurank/error.h"

namespace neurank {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(trim(s.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& v, std::size_t line, std::string_view key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParseError(line, "invalid value '" + v + "' for " + std::string(key));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ParseError(line, "non-finite value for " + std::string(key));
  }
  return out;
}

bool parse_bool(const std::string& v, std::size_t line, std::string_view key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, "invalid boolean '" + v + "' for " + std::string(key));
}

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <std::size_t N>
std::string fmt_list(const std::array<double, N>& a) {
  std::string s;
  for (std::size_t i = 0; i < N; ++i) s += (i ? "," : "") + fmt_real(a[i]);
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  policy.validate();
  persona.validate();
  if (rounds < 1) throw ValidationError("T must be >= 1");
  if (cutoff < 1) throw ValidationError("k must be >= 1");
  if (depth < 2) throw ValidationError("L must be >= 2");
  if (width < 2 || width % 2 != 0) throw ValidationError("m must be even and >= 2");
  if (!(eta > 0.0)) throw ValidationError("eta must be > 0");
  if (!(lambda_reg > 0.0)) throw ValidationError("lambda_reg must be > 0");
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
  if (!(epsilon_offset >= 0.0)) throw ValidationError("epsilon_offset must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in (0, 1]");
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw ValidationError("holdout_fraction must lie in [0, 1)");
  }
  if (seeds.empty()) throw ValidationError("at least one seed is required");
  if (eval_every < 1) throw ValidationError("eval_every must be >= 1");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::optional<std::vector<double>> click, stop;
  std::string persona_name_value = "perfect";
  std::optional<double> epsilon;
  std::string policy_value = "olranknet";

  using Setter = std::function<void(const std::string&, std::size_t)>;
  const std::map<std::string, Setter, std::less<>> setters{
      {"dataset", [&](const std::string& v, std::size_t) {
         cfg.dataset_path = v == "synthetic" ? std::filesystem::path{} : std::filesystem::path{v};
       }},
      {"augment", [&](const std::string& v, std::size_t l) { cfg.augment = parse_bool(v, l, "augment"); }},
      {"synthetic.dim", [&](const std::string& v, std::size_t l) { cfg.synthetic.dim = parse_number<std::size_t>(v, l, "synthetic.dim"); }},
      {"synthetic.queries", [&](const std::string& v, std::size_t l) { cfg.synthetic.n_queries = parse_number<std::size_t>(v, l, "synthetic.queries"); }},
      {"synthetic.docs", [&](const std::string& v, std::size_t l) { cfg.synthetic.docs_per_query = parse_number<std::size_t>(v, l, "synthetic.docs"); }},
      {"synthetic.hardness", [&](const std::string& v, std::size_t) { cfg.synthetic.hardness = parse_hardness(v); }},
      {"synthetic.seed", [&](const std::string& v, std::size_t l) { cfg.synthetic.seed = parse_number<std::uint64_t>(v, l, "synthetic.seed"); }},
      {"holdout_fraction", [&](const std::string& v, std::size_t l) { cfg.holdout_fraction = parse_number<double>(v, l, "holdout_fraction"); }},
      {"policy", [&](const std::string& v, std::size_t) { policy_value = v; }},
      {"epsilon", [&](const std::string& v, std::size_t l) { epsilon = parse_number<double>(v, l, "epsilon"); }},
      {"T", [&](const std::string& v, std::size_t l) { cfg.rounds = parse_number<std::size_t>(v, l, "T"); }},
      {"k", [&](const std::string& v, std::size_t l) { cfg.cutoff = parse_number<std::size_t>(v, l, "k"); }},
      {"m", [&](const std::string& v, std::size_t l) { cfg.width = parse_number<std::size_t>(v, l, "m"); }},
      {"L", [&](const std::string& v, std::size_t l) { cfg.depth = parse_number<std::size_t>(v, l, "L"); }},
      {"eta", [&](const std::string& v, std::size_t l) { cfg.eta = parse_number<double>(v, l, "eta"); }},
      {"J", [&](const std::string& v, std::size_t l) { cfg.steps = parse_number<std::size_t>(v, l, "J"); }},
      {"lambda_reg", [&](const std::string& v, std::size_t l) { cfg.lambda_reg = parse_number<double>(v, l, "lambda_reg"); }},
      {"alpha", [&](const std::string& v, std::size_t l) { cfg.alpha = parse_number<double>(v, l, "alpha"); }},
      {"epsilon_offset", [&](const std::string& v, std::size_t l) { cfg.epsilon_offset = parse_number<double>(v, l, "epsilon_offset"); }},
      {"gamma", [&](const std::string& v, std::size_t l) { cfg.gamma = parse_number<double>(v, l, "gamma"); }},
      {"uncertainty", [&](const std::string& v, std::size_t l) {
         if (v == "diagonal") cfg.uncertainty = UncertaintyMode::kDiagonal;
         else if (v == "dense") cfg.uncertainty = UncertaintyMode::kDense;
         else throw ParseError(l, "uncertainty must be diagonal or dense");
       }},
      {"warm_start", [&](const std::string& v, std::size_t l) { cfg.warm_start = parse_bool(v, l, "warm_start"); }},
      {"skip_zero_click_train", [&](const std::string& v, std::size_t l) { cfg.skip_zero_click_train = parse_bool(v, l, "skip_zero_click_train"); }},
      {"max_history", [&](const std::string& v, std::size_t l) { cfg.max_history = parse_number<std::size_t>(v, l, "max_history"); }},
      {"check_edges", [&](const std::string& v, std::size_t l) { cfg.check_edges = parse_bool(v, l, "check_edges"); }},
      {"persona", [&](const std::string& v, std::size_t) { persona_name_value = v; }},
      {"click_prob", [&](const std::string& v, std::size_t l) {
         click.emplace();
         for (const auto& t : split_list(v)) click->push_back(parse_number<double>(t, l, "click_prob"));
       }},
      {"stop_prob", [&](const std::string& v, std::size_t l) {
         stop.emplace();
         for (const auto& t : split_list(v)) stop->push_back(parse_number<double>(t, l, "stop_prob"));
       }},
      {"seeds", [&](const std::string& v, std::size_t l) {
         cfg.seeds.clear();
         for (const auto& t : split_list(v)) cfg.seeds.push_back(parse_number<std::uint64_t>(t, l, "seeds"));
       }},
      {"eval_every", [&](const std::string& v, std::size_t l) { cfg.eval_every = parse_number<std::size_t>(v, l, "eval_every"); }},
      {"threads", [&](const std::string& v, std::size_t l) { cfg.threads = parse_number<std::size_t>(v, l, "threads"); }},
      {"output_dir", [&](const std::string& v, std::size_t) { cfg.output_dir = v; }},
  };

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view(text);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const std::string body = trim(view);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(line, "unknown key '" + key + "'");
    try {
      it->second(value, line);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }
  }

  cfg.policy.kind = parse_policy_kind(policy_value);
  if (cfg.policy.kind == PolicyKind::kEpsilonGreedy) {
    cfg.policy.epsilon = epsilon.value_or(0.1);
  } else if (epsilon) {
    throw ValidationError("epsilon is only meaningful for policy=epsilon_greedy");
  }

  if (persona_name_value == "custom") {
    if (!click || !stop) {
      throw ValidationError("persona=custom needs click_prob and stop_prob (five values each)");
    }
    cfg.persona = custom_config(*click, *stop);
  } else {
    if (click || stop) throw ValidationError("click_prob/stop_prob require persona=custom");
    cfg.persona = builtin_config(persona_name_value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return parse_config(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.reason());
  }
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "dataset = " << (cfg.dataset_path.empty() ? std::string("synthetic") : cfg.dataset_path.string()) << '\n';
  os << "augment = " << (cfg.augment ? "true" : "false") << '\n';
  os << "synthetic.dim = " << cfg.synthetic.dim << '\n';
  os << "synthetic.queries = " << cfg.synthetic.n_queries << '\n';
  os << "synthetic.docs = " << cfg.synthetic.docs_per_query << '\n';
  os << "synthetic.hardness = " << hardness_name(cfg.synthetic.hardness) << '\n';
  os << "synthetic.seed = " << cfg.synthetic.seed << '\n';
  os << "holdout_fraction = " << fmt_real(cfg.holdout_fraction) << '\n';
  os << "policy = " << policy_name(cfg.policy.kind) << '\n';
  if (cfg.policy.epsilon) os << "epsilon = " << fmt_real(*cfg.policy.epsilon) << '\n';
  os << "T = " << cfg.rounds << '\n';
  os << "k = " << cfg.cutoff << '\n';
  os << "m = " << cfg.width << '\n';
  os << "L = " << cfg.depth << '\n';
  os << "eta = " << fmt_real(cfg.eta) << '\n';
  os << "J = " << cfg.steps << '\n';
  os << "lambda_reg = " << fmt_real(cfg.lambda_reg) << '\n';
  os << "alpha = " << fmt_real(cfg.alpha) << '\n';
  os << "epsilon_offset = " << fmt_real(cfg.epsilon_offset) << '\n';
  os << "gamma = " << fmt_real(cfg.gamma) << '\n';
  os << "uncertainty = " << (cfg.uncertainty == UncertaintyMode::kDense ? "dense" : "diagonal") << '\n';
  os << "warm_start = " << (cfg.warm_start ? "true" : "false") << '\n';
  os << "skip_zero_click_train = " << (cfg.skip_zero_click_train ? "true" : "false") << '\n';
  os << "max_history = " << cfg.max_history << '\n';
  os << "check_edges = " << (cfg.check_edges ? "true" : "false") << '\n';
  os << "persona = " << persona_name(cfg.persona.persona) << '\n';
  if (cfg.persona.persona == Persona::kCustom) {
    os << "click_prob = " << fmt_list(cfg.persona.click_prob) << '\n';
    os << "stop_prob = " << fmt_list(cfg.persona.stop_prob) << '\n';
  }
  os << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) os << (i ? "," : "") << cfg.seeds[i];
  os << '\n';
  os << "eval_every = " << cfg.eval_every << '\n';
  os << "threads = " << cfg.threads << '\n';
  os << "output_dir = " << cfg.output_dir.string() << '\n';
  return os.str();
}

}  // namespace neurank
