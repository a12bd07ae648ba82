#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "besovlab/error.hpp"

namespace besovlab {

/// Closed set of bounded deterministic integrands, serializable by name.
class WeightFunction {
 public:
  enum class Kind { Constant, Affine, Sine, Indicator };

  static WeightFunction constant(double c) { return WeightFunction(Kind::Constant, {c}); }
  /// c0 + c1 * t
  static WeightFunction affine(double c0, double c1) { return WeightFunction(Kind::Affine, {c0, c1}); }
  /// amplitude * sin(2 pi frequency t + phase)
  static WeightFunction sine(double amplitude, double frequency, double phase = 0.0) {
    return WeightFunction(Kind::Sine, {amplitude, frequency, phase});
  }
  /// 1 on [lo, hi], 0 elsewhere.
  static WeightFunction indicator(double lo, double hi) { return WeightFunction(Kind::Indicator, {lo, hi}); }

  /// Parses "const:c", "affine:c0,c1", "sine:amp,freq[,phase]", "indicator:lo,hi".
  static WeightFunction parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    std::vector<double> args;
    if (colon != std::string_view::npos) {
      std::stringstream ss{std::string(text.substr(colon + 1))};
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          args.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw ConfigurationError("bad weight parameter '" + item + "'");
        }
      }
    }
    const Kind kind = kind_from_name(name);
    if (kind == Kind::Sine && args.size() == 2) args.push_back(0.0);
    if (args.size() != arity(kind))
      throw ConfigurationError("weight '" + name + "' takes " + std::to_string(arity(kind)) + " parameters");
    return WeightFunction(kind, args);
  }

  static Kind kind_from_name(const std::string& name) {
    if (name == "const" || name == "constant") return Kind::Constant;
    if (name == "affine") return Kind::Affine;
    if (name == "sine") return Kind::Sine;
    if (name == "indicator") return Kind::Indicator;
    throw ConfigurationError("unknown weight function '" + name + "'");
  }

  static std::size_t arity(Kind kind) {
    switch (kind) {
      case Kind::Constant: return 1;
      case Kind::Affine: return 2;
      case Kind::Sine: return 3;
      case Kind::Indicator: return 2;
    }
    return 0;
  }

  static WeightFunction from_parts(Kind kind, std::vector<double> params) {
    if (params.size() != arity(kind)) throw ConfigurationError("wrong number of weight parameters");
    return WeightFunction(kind, std::move(params));
  }

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Constant: return "const";
      case Kind::Affine: return "affine";
      case Kind::Sine: return "sine";
      case Kind::Indicator: return "indicator";
    }
    return {};
  }

  bool is_identically(double c) const { return kind_ == Kind::Constant && params_[0] == c; }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::Constant: return params_[0];
      case Kind::Affine: return params_[0] + params_[1] * t;
      case Kind::Sine: return params_[0] * std::sin(2.0 * std::numbers::pi * params_[1] * t + params_[2]);
      case Kind::Indicator: return (t >= params_[0] && t <= params_[1]) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

 private:
  WeightFunction(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {
    for (double v : params_)
      if (!std::isfinite(v)) throw ConfigurationError("weight function parameters must be finite");
    if (kind_ == Kind::Indicator && !(params_[0] <= params_[1]))
      throw ConfigurationError("indicator weight needs lo <= hi");
  }

  Kind kind_;
  std::vector<double> params_;
};

}  // namespace besovlab
