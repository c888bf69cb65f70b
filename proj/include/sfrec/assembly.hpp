#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sfrec/superfrustum.hpp"
#include "sfrec/vec.hpp"

namespace sfrec {

// Blend clamp range; units are the normalized shape frame (longest bounding
// box side = 1, diagonal treated as sqrt(3)).
inline constexpr double kBlendMin = 1e-4;
inline constexpr double kBlendMax = 0.05 * 1.7320508075688772;
inline constexpr double kBlendInit = 0.01;
inline constexpr double kBetaOccDefault = 64.0;

struct RigidPose {
  Quat rotation = quat_identity();
  Vec3 translation{0, 0, 0};

  // World point into the primitive's canonical frame.
  Vec3 to_canonical(const Vec3& p) const {
    return quat_to_matrix(rotation).transposed() * (p - translation);
  }
};

struct PosedPrimitive {
  SuperFrustumParams params;
  RigidPose pose;
  double blend = kBlendInit;
  double existence_logit = 2.0;

  double existence() const;  // sigmoid of the logit
  bool alive() const { return existence() >= 0.5; }

  double eval(const Vec3& p) const { return eval_sdf(pose.to_canonical(p), params); }
};

enum class FieldMode {
  Training,  // existence modulation f* = q f + (1 - q) with q = sigmoid(logit)
  Hard,      // primitives with q < 0.5 are skipped entirely
};

// Polynomial smooth minimum of two signed distances; underestimates min(a, b)
// by at most beta/4 and equals it exactly once |a - b| >= beta.
double smooth_union(double a, double b, double beta);

// Value plus partials w.r.t. both operands and beta (used by the fold
// backward pass during optimization).
struct SmoothUnionGrad {
  double value, da, db, dbeta;
};
SmoothUnionGrad smooth_union_grad(double a, double b, double beta);

struct Assembly {
  std::vector<PosedPrimitive> primitives;
  double beta_occ = kBetaOccDefault;

  std::size_t size() const { return primitives.size(); }
  std::size_t live_count() const;

  // Left fold of smooth_union in stored order. Empty (or all-dead hard-mode)
  // assemblies evaluate to +infinity.
  double eval_field(const Vec3& p, FieldMode mode = FieldMode::Hard) const;

  // Same fold with caller-supplied existence values (training mode only).
  double eval_field_with_q(const Vec3& p, const std::vector<double>& q) const;

  double occupancy(const Vec3& p, FieldMode mode = FieldMode::Hard) const;

  // Assembly with dead primitives removed.
  Assembly hard_filtered() const;

  Box3 bounding_box_estimate() const;
};

inline constexpr double kEmptyFieldValue = std::numeric_limits<double>::infinity();

// JSON round trip. Serialization preserves every scalar at full precision.
std::string serialize(const Assembly& z);
Assembly deserialize(const std::string& json_text);
void save_assembly(const Assembly& z, const std::string& path);
Assembly load_assembly(const std::string& path);

}  // namespace sfrec
