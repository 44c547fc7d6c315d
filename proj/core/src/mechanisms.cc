// Copyright 2026 The privleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privleak/mechanisms.h"

#include <cmath>
#include <numbers>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privleak/info_theory.h"
#include "privleak/matrix_io.h"

namespace privleak {
namespace {

Mechanism FlipMechanism(const ProblemSpace& space, const Query& query,
                        double p) {
  const int m = space.output_size();
  Matrix rows(space.universe_size(), m, p / (m - 1));
  for (std::size_t x = 0; x < rows.rows(); ++x) {
    rows(x, query.Evaluate(space, x)) = 1.0 - p;
  }
  return Mechanism::Normalized(std::move(rows));
}

absl::Status RequireBinary(const ProblemSpace& space, absl::string_view name) {
  if (space.output_size() != 2) {
    return absl::UnimplementedError(absl::StrFormat(
        "%s mechanism is only defined for binary outputs (got %d)", name,
        space.output_size()));
  }
  return absl::OkStatus();
}

absl::Status CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Mechanism> BuildBsc(const ProblemSpace& space,
                                   const Query& query, double p) {
  if (!(p >= 0.0 && p <= 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("flip probability %g is outside [0, 1/2]", p));
  }
  if (absl::Status s = query.Validate(space); !s.ok()) return s;
  return FlipMechanism(space, query, p);
}

double LaplaceFlipProbability(double epsilon) {
  return 0.5 * std::exp(-epsilon / 2.0);
}

double ExponentialFlipProbability(double epsilon) {
  return 1.0 / (std::exp(epsilon / 2.0) + 1.0);
}

double ExponentialFlipMass(double epsilon, int outputs) {
  return (outputs - 1) / (std::exp(epsilon / 2.0) + outputs - 1);
}

absl::StatusOr<Mechanism> BuildLaplaceThresholded(const ProblemSpace& space,
                                                  const Query& query,
                                                  double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (absl::Status s = RequireBinary(space, "thresholded Laplace"); !s.ok()) {
    return s;
  }
  return BuildBsc(space, query, LaplaceFlipProbability(epsilon));
}

absl::StatusOr<Mechanism> BuildExponential(const ProblemSpace& space,
                                           const Query& query, double epsilon,
                                           bool extended) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (space.output_size() == 2) {
    return BuildBsc(space, query, ExponentialFlipProbability(epsilon));
  }
  if (!extended) return RequireBinary(space, "exponential");
  if (absl::Status s = query.Validate(space); !s.ok()) return s;
  return FlipMechanism(space, query,
                       ExponentialFlipMass(epsilon, space.output_size()));
}

double BscCapacityClosedForm(double p) {
  return std::numbers::ln2 - BinaryEntropy(p);
}

absl::StatusOr<Mechanism> LoadMechanism(const std::string& path) {
  absl::StatusOr<Matrix> m = ReadStochasticMatrix(path);
  if (!m.ok()) return m.status();
  if (m->cols() < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: a mechanism needs at least two outputs", path));
  }
  return Mechanism::Create(*std::move(m));
}

absl::StatusOr<Mechanism> LoadMechanism(const std::string& path,
                                        const ProblemSpace& space) {
  absl::StatusOr<Mechanism> m = LoadMechanism(path);
  if (!m.ok()) return m;
  if (m->input_size() != space.universe_size() ||
      static_cast<int>(m->output_size()) != space.output_size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s: mechanism is %dx%d but the space needs %dx%d", path,
        m->input_size(), m->output_size(), space.universe_size(),
        space.output_size()));
  }
  return m;
}

absl::StatusOr<JointPrior> LoadPrior(const std::string& path) {
  absl::StatusOr<Matrix> m = ReadStochasticMatrix(path);
  if (!m.ok()) return m.status();
  if (m->cols() != 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: a prior must have exactly one column", path));
  }
  std::vector<double> probs(m->data().begin(), m->data().end());
  return JointPrior::Create(std::move(probs));
}

std::string MechanismSpec::Describe() const {
  switch (kind) {
    case Kind::kBsc:
      return absl::StrCat("bsc:", parameter);
    case Kind::kLaplace:
      return absl::StrCat("laplace:", parameter);
    case Kind::kExponential:
      return absl::StrCat("exp:", parameter);
    case Kind::kFile:
      return absl::StrCat("file:", path);
  }
  return "";
}

absl::StatusOr<MechanismSpec> ParseMechanismSpec(absl::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == absl::string_view::npos) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "mechanism '%s' must look like bsc:p, laplace:eps, exp:eps or "
        "file:path",
        text));
  }
  const absl::string_view kind = text.substr(0, colon);
  const absl::string_view arg = text.substr(colon + 1);
  MechanismSpec spec;
  if (kind == "file") {
    if (arg.empty()) return absl::InvalidArgumentError("empty file path");
    spec.kind = MechanismSpec::Kind::kFile;
    spec.path = std::string(arg);
    return spec;
  }
  if (kind == "bsc") {
    spec.kind = MechanismSpec::Kind::kBsc;
  } else if (kind == "laplace") {
    spec.kind = MechanismSpec::Kind::kLaplace;
  } else if (kind == "exp") {
    spec.kind = MechanismSpec::Kind::kExponential;
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown mechanism kind '%s'", kind));
  }
  if (!absl::SimpleAtod(arg, &spec.parameter)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("'%s' is not a number", arg));
  }
  return spec;
}

absl::StatusOr<Mechanism> RealizeMechanism(const MechanismSpec& spec,
                                           const ProblemSpace& space,
                                           const Query& query,
                                           bool extended) {
  switch (spec.kind) {
    case MechanismSpec::Kind::kBsc:
      return BuildBsc(space, query, spec.parameter);
    case MechanismSpec::Kind::kLaplace:
      return BuildLaplaceThresholded(space, query, spec.parameter);
    case MechanismSpec::Kind::kExponential:
      return BuildExponential(space, query, spec.parameter, extended);
    case MechanismSpec::Kind::kFile:
      return LoadMechanism(spec.path, space);
  }
  return absl::InternalError("unhandled mechanism kind");
}

}  // namespace privleak
