#pragma once

// Serializable geometry shared by Bloch-Circle (2-D) and toroid (3-D) panels.
//
// JSON envelope: {"version": "scene/1", "primitives": [...]}. Each primitive
// has "id" and "kind"; kinds are point, segment, polyline, torus and
// annotation. Readers skip kinds they do not know.

#include "bloch_geometry.hpp"
#include "vec.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace qubitgeo {

inline constexpr const char *kSceneVersion = "scene/1";

//! 2 coordinates for Bloch panels, 3 for the toroid.
using Coords = std::vector<double>;

inline Coords coords(Vec2 v) { return {v.x, v.y}; }
inline Coords coords(Vec3 v) { return {v.x, v.y, v.z}; }

struct PointPrim {
  std::string id;
  Coords at;
  std::string label;
  std::string style;
};

struct SegmentPrim {
  std::string id;
  Coords from;
  Coords to;
  double length = 0.0;
  std::string label;
};

struct PolylinePrim {
  std::string id;
  std::vector<Coords> samples;
  bool closed = false;
  std::string label;
};

struct TorusPrim {
  std::string id;
  double major_radius = 0.0;
  double tube_radius = 0.0;
  std::string label;
};

struct AnnotationPrim {
  std::string id;
  std::string text;
  Coords anchor;
  std::map<std::string, double> params;
};

using Primitive =
    std::variant<PointPrim, SegmentPrim, PolylinePrim, TorusPrim, AnnotationPrim>;

struct Scene {
  std::string version = kSceneVersion;
  std::vector<Primitive> primitives;

  template <class T> const T *find(std::string_view id) const {
    for (const auto &p : primitives)
      if (const auto *t = std::get_if<T>(&p); t && t->id == id)
        return t;
    return nullptr;
  }

  template <class T> std::vector<const T *> all() const {
    std::vector<const T *> out;
    for (const auto &p : primitives)
      if (const auto *t = std::get_if<T>(&p))
        out.push_back(t);
    return out;
  }

  bool ids_unique() const {
    std::set<std::string> seen;
    for (const auto &p : primitives)
      if (!seen.insert(std::visit([](const auto &x) { return x.id; }, p)).second)
        return false;
    return true;
  }
};

namespace detail {

inline const char *coord_key(const Coords &c) { return c.size() == 3 ? "xyz" : "xy"; }

inline Coords read_coords(const nlohmann::json &j) {
  Coords c = j.get<Coords>();
  if (c.size() != 2 && c.size() != 3)
    throw Error(ErrorCode::BadArgument, "coordinates must have 2 or 3 entries");
  return c;
}

inline Coords read_point_coords(const nlohmann::json &j) {
  return read_coords(j.contains("xyz") ? j.at("xyz") : j.at("xy"));
}

} // namespace detail

inline nlohmann::json to_json(const Primitive &prim) {
  using nlohmann::json;
  return std::visit(
      [](const auto &p) -> json {
        using T = std::decay_t<decltype(p)>;
        json j{{"id", p.id}};
        if constexpr (std::is_same_v<T, PointPrim>) {
          j["kind"] = "point";
          j[detail::coord_key(p.at)] = p.at;
          j["label"] = p.label;
          j["style"] = p.style;
        } else if constexpr (std::is_same_v<T, SegmentPrim>) {
          j["kind"] = "segment";
          j["endpoints"] = json::array({p.from, p.to});
          j["length"] = p.length;
          j["label"] = p.label;
        } else if constexpr (std::is_same_v<T, PolylinePrim>) {
          j["kind"] = "polyline";
          j["samples"] = p.samples;
          j["closed"] = p.closed;
          j["label"] = p.label;
        } else if constexpr (std::is_same_v<T, TorusPrim>) {
          j["kind"] = "torus";
          j["params"] = {{"major_radius", p.major_radius},
                         {"tube_radius", p.tube_radius}};
          j["label"] = p.label;
        } else {
          j["kind"] = "annotation";
          j["text"] = p.text;
          j["anchor"] = p.anchor;
          j["params"] = p.params;
        }
        return j;
      },
      prim);
}

inline nlohmann::json to_json(const Scene &scene) {
  nlohmann::json prims = nlohmann::json::array();
  for (const auto &p : scene.primitives)
    prims.push_back(to_json(p));
  return {{"version", scene.version}, {"primitives", std::move(prims)}};
}

//! Parses a Scene, skipping primitives of unknown kind. Malformed known
//! primitives throw (nlohmann::json::exception or Error).
inline Scene scene_from_json(const nlohmann::json &j) {
  Scene scene;
  scene.version = j.at("version").get<std::string>();
  for (const auto &p : j.at("primitives")) {
    const auto kind = p.at("kind").get<std::string>();
    const auto id = p.at("id").get<std::string>();
    const auto label = p.value("label", std::string{});
    if (kind == "point") {
      scene.primitives.push_back(PointPrim{id, detail::read_point_coords(p), label,
                                           p.value("style", std::string{})});
    } else if (kind == "segment") {
      const auto &ends = p.at("endpoints");
      scene.primitives.push_back(SegmentPrim{id, detail::read_coords(ends.at(0)),
                                             detail::read_coords(ends.at(1)),
                                             p.at("length").get<double>(), label});
    } else if (kind == "polyline") {
      PolylinePrim poly{id, {}, p.at("closed").get<bool>(), label};
      for (const auto &s : p.at("samples"))
        poly.samples.push_back(detail::read_coords(s));
      scene.primitives.push_back(std::move(poly));
    } else if (kind == "torus") {
      const auto &params = p.at("params");
      scene.primitives.push_back(TorusPrim{id, params.at("major_radius").get<double>(),
                                           params.at("tube_radius").get<double>(),
                                           label});
    } else if (kind == "annotation") {
      scene.primitives.push_back(AnnotationPrim{
          id, p.at("text").get<std::string>(), detail::read_coords(p.at("anchor")),
          p.value("params", std::map<std::string, double>{})});
    }
  }
  return scene;
}

//! Largest |stored length - endpoint distance| over all segments.
inline double max_segment_inconsistency(const Scene &scene) {
  double worst = 0.0;
  for (const auto *seg : scene.all<SegmentPrim>()) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < seg->from.size(); ++i) {
      const double d = seg->from[i] - seg->to[i];
      d2 += d * d;
    }
    worst = std::max(worst, std::abs(std::sqrt(d2) - seg->length));
  }
  return worst;
}

//! Bloch panel as a Scene: the circle outline, points A B C D S, the labeled
//! segments and the sign annotations for b and c.
inline Scene to_scene(const BlochScene &bs, int samples = 128) {
  Scene scene;
  auto &prims = scene.primitives;

  PolylinePrim circle{"circle", {}, true, "Bloch Circle"};
  for (int k = 0; k < samples; ++k)
    circle.samples.push_back(
        coords(bs.circle_radius * bloch_direction(kTwoPi * k / samples)));
  circle.samples.push_back(circle.samples.front());
  prims.push_back(std::move(circle));

  prims.push_back(PointPrim{"A", coords(bs.a), "|0>", "basis"});
  prims.push_back(PointPrim{"B", coords(bs.b), "|1>", "basis"});
  prims.push_back(PointPrim{"C", coords(bs.c), "C", "center"});
  prims.push_back(PointPrim{"D", coords(bs.d), "D", "foot"});
  prims.push_back(PointPrim{"S", coords(bs.s), "S", bs.pure ? "pure" : "mixed"});
  for (const auto &seg : bs.segments)
    prims.push_back(SegmentPrim{"seg." + seg.id, coords(seg.from), coords(seg.to),
                                seg.length, seg.label});

  const Coords origin{0.0, 0.0};
  prims.push_back(AnnotationPrim{"sign.b", "sign(b) = " + std::to_string(bs.sign_b),
                                 coords(bs.s), {{"value", bs.sign_b}}});
  prims.push_back(AnnotationPrim{"sign.c", "sign(c) = " + std::to_string(bs.sign_c),
                                 coords(bs.d), {{"value", bs.sign_c}}});
  prims.push_back(AnnotationPrim{"basis", "basis axis", origin,
                                 {{"value", bs.basis.axis_angle.value()}}});
  return scene;
}

} // namespace qubitgeo
