#include "gustrata/serialize.hpp"

#include "gustrata/errors.hpp"

namespace gustrata::io {

json context_to_json(const witt::RingContext& ctx) {
  return {{"p", ctx.prime()}, {"d", ctx.degree()}, {"N", ctx.precision()}, {"modulus", ctx.defining_polynomial()}};
}

witt::ContextPtr context_from_json(const json& j) {
  try {
    auto ctx = witt::RingContext::make(j.at("p").get<std::int64_t>(), j.at("d").get<int>(), j.at("N").get<int>());
    if (j.contains("modulus") && j.at("modulus").get<std::vector<std::int64_t>>() != ctx->defining_polynomial()) {
      throw InvalidArgument("recorded modulus polynomial differs from the canonical one");
    }
    return ctx;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad context JSON: ") + e.what());
  }
}

json scalar_to_json(const witt::PadicScalar& x) {
  json coords = json::array();
  for (const auto& c : x.coords()) coords.push_back(c.get_str());
  return {{"coords", coords}};
}

witt::PadicScalar scalar_from_json(const witt::ContextPtr& ctx, const json& j) {
  try {
    const auto& coords = j.at("coords");
    std::vector<mpz_class> out;
    for (const auto& c : coords) {
      mpz_class value;
      if (value.set_str(c.get<std::string>(), 10) != 0) throw InvalidArgument("bad integer in scalar");
      if (value < 0 || value >= ctx->modulus()) throw InvalidArgument("scalar coordinate outside [0, p^N)");
      out.push_back(value);
    }
    return witt::PadicScalar(ctx, std::move(out));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad scalar JSON: ") + e.what());
  }
}

json display_to_json(const DieudonneDisplay& display) {
  json basis = json::array();
  for (const auto& b : display.basis) basis.push_back(b.name());
  json frobenius = json::array();
  for (std::size_t j = 0; j < display.frobenius.cols(); ++j) {
    json column = json::array();
    for (std::size_t i = 0; i < display.frobenius.rows(); ++i) column.push_back(scalar_to_json(display.frobenius(i, j)));
    frobenius.push_back(column);
  }
  json pairing = json::array();
  for (std::size_t i = 0; i < display.pairing.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < display.pairing.cols(); ++j) row.push_back(scalar_to_json(display.pairing(i, j)));
    pairing.push_back(row);
  }
  return {{"context", context_to_json(*display.context)},
          {"basis", basis},
          {"frobenius", frobenius},
          {"pairing", pairing},
          {"grading", {{"u", display.u_indices}, {"v", display.v_indices}}}};
}

DieudonneDisplay display_from_json(const json& j) {
  try {
    DieudonneDisplay d;
    d.context = context_from_json(j.at("context"));
    for (const auto& name : j.at("basis")) d.basis.push_back(BasisLabel::parse(name.get<std::string>()));
    const std::size_t n = d.basis.size();
    const witt::PadicScalar zero(d.context);
    d.frobenius = ScalarMatrix(n, n, zero);
    d.pairing = ScalarMatrix(n, n, zero);
    const auto& frob = j.at("frobenius");
    const auto& pair = j.at("pairing");
    if (frob.size() != n || pair.size() != n) throw InvalidArgument("matrix dimensions do not match the basis");
    for (std::size_t a = 0; a < n; ++a) {
      if (frob[a].size() != n || pair[a].size() != n) throw InvalidArgument("matrix dimensions do not match the basis");
      for (std::size_t b = 0; b < n; ++b) {
        d.frobenius(b, a) = scalar_from_json(d.context, frob[a][b]);
        d.pairing(a, b) = scalar_from_json(d.context, pair[a][b]);
      }
    }
    d.u_indices = j.at("grading").at("u").get<std::vector<std::size_t>>();
    d.v_indices = j.at("grading").at("v").get<std::vector<std::size_t>>();
    return d;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad display JSON: ") + e.what());
  }
}

json polygon_to_json(const NewtonPolygon& polygon) {
  json slopes = json::array();
  for (const auto& s : polygon.segments()) {
    slopes.push_back({{"num", s.slope.numerator()}, {"den", s.slope.denominator()}, {"mult", s.multiplicity}});
  }
  return {{"slopes", slopes}};
}

NewtonPolygon polygon_from_json(const json& j) {
  try {
    std::vector<SlopeSegment> segments;
    for (const auto& s : j.at("slopes")) {
      segments.push_back({Rational(s.at("num").get<std::int64_t>(), s.at("den").get<std::int64_t>()),
                          s.at("mult").get<int>()});
    }
    return NewtonPolygon(std::move(segments));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad polygon JSON: ") + e.what());
  }
}

json cycles_to_json(const graph::SlopeGraph& g, const std::vector<graph::CycleSummary>& cycles) {
  json out = json::array();
  for (const auto& c : cycles) {
    json vertices = json::array();
    for (auto v : c.vertices) vertices.push_back(g.vertices()[v].name());
    out.push_back({{"vertices", vertices}, {"length", c.length}, {"weight", c.weight}});
  }
  return out;
}

}  // namespace gustrata::io
