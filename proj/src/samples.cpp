#include "unfold/samples.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "unfold/errors.hpp"

namespace unfold {

namespace {

void append_double(std::string& buf, double v) {
  static_assert(sizeof(double) == 8);
  char bytes[8];
  std::memcpy(bytes, &v, 8);
  buf.append(bytes, 8);
}

double take_double(const char*& p) {
  double v;
  std::memcpy(&v, p, 8);
  p += 8;
  return v;
}

}  // namespace

int PosteriorSamples::traj_offset(int i) const {
  int off = 0;
  for (int k = 0; k < i; ++k) off += tenure_length(k);
  return off;
}

double PosteriorSamples::beta_at(const Draw& d, int i, int t) const {
  if (kind == ModelKind::Static) return d.beta(i);
  if (t < tenure[i][0] || t > tenure[i][1]) {
    throw not_found_error("beta_at: term outside tenure window");
  }
  return d.beta(traj_offset(i) + (t - tenure[i][0]));
}

double PosteriorSamples::beta_statistic(const Draw& d, int i) const {
  if (kind == ModelKind::Static) return d.beta(i);
  const int len = tenure_length(i);
  return d.beta.segment(traj_offset(i), len).mean();
}

int PosteriorSamples::record_length() const {
  int beta_len = 0;
  if (kind == ModelKind::Static) {
    beta_len = num_legislators();
  } else {
    for (int i = 0; i < num_legislators(); ++i) beta_len += tenure_length(i);
  }
  return beta_len + 5 * num_votes() + (kind == ModelKind::Dynamic ? 1 : 0);
}

void PosteriorSamples::validate() const {
  if (kind == ModelKind::Dynamic) {
    if (vote_terms.size() != vote_ids.size() ||
        tenure.size() != legislator_ids.size()) {
      throw validation_error("PosteriorSamples: dynamic metadata incomplete");
    }
  }
  const int expected_beta =
      kind == ModelKind::Static ? num_legislators()
                                : record_length() - 5 * num_votes() - 1;
  for (const auto& d : draws) {
    if (d.beta.size() != expected_beta ||
        d.items.size() != static_cast<std::size_t>(num_votes())) {
      throw validation_error("PosteriorSamples: draw dimensions inconsistent");
    }
    for (const auto& item : d.items) item.validate();
  }
}

void write_store(const PosteriorSamples& samples, const std::string& dir) {
  samples.validate();
  std::filesystem::create_directories(dir);

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["model"] = samples.kind == ModelKind::Static ? "static" : "dynamic";
  manifest["data_fingerprint"] = samples.data_fingerprint;
  manifest["config"] = samples.config;
  manifest["legislators"] = samples.legislator_ids;
  manifest["votes"] = samples.vote_ids;
  manifest["num_draws"] = samples.draws.size();
  manifest["record_length"] = samples.record_length();
  manifest["record_layout"] =
      "betas, then per vote [alpha1 alpha2 delta1 delta2 z], then rho when "
      "dynamic; 64-bit little-endian IEEE doubles, row-major";
  if (samples.kind == ModelKind::Dynamic) {
    manifest["num_terms"] = samples.num_terms;
    manifest["vote_terms"] = samples.vote_terms;
    nlohmann::json tenure = nlohmann::json::array();
    for (const auto& w : samples.tenure) tenure.push_back({w[0], w[1]});
    manifest["tenure"] = tenure;
    if (std::isfinite(samples.mh_acceptance_rate)) {
      manifest["mh_acceptance_rate"] = samples.mh_acceptance_rate;
    }
  }

  std::ofstream mf(dir + "/manifest.json", std::ios::binary);
  if (!mf) throw validation_error("cannot write " + dir + "/manifest.json");
  mf << manifest.dump(2) << "\n";

  std::string buf;
  buf.reserve(samples.draws.size() * samples.record_length() * 8);
  for (const auto& d : samples.draws) {
    for (Eigen::Index k = 0; k < d.beta.size(); ++k) append_double(buf, d.beta(k));
    for (const auto& item : d.items) {
      append_double(buf, item.alpha1);
      append_double(buf, item.alpha2);
      append_double(buf, item.delta1);
      append_double(buf, item.delta2);
      append_double(buf, static_cast<double>(item.z));
    }
    if (samples.kind == ModelKind::Dynamic) append_double(buf, d.rho);
  }
  std::ofstream bf(dir + "/draws.bin", std::ios::binary);
  if (!bf) throw validation_error("cannot write " + dir + "/draws.bin");
  bf.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

PosteriorSamples read_store(const std::string& dir) {
  std::ifstream mf(dir + "/manifest.json", std::ios::binary);
  if (!mf) throw not_found_error("missing manifest: " + dir + "/manifest.json");
  nlohmann::json manifest = nlohmann::json::parse(mf);

  PosteriorSamples s;
  s.kind = manifest.at("model") == "dynamic" ? ModelKind::Dynamic : ModelKind::Static;
  s.data_fingerprint = manifest.at("data_fingerprint");
  s.config = manifest.at("config");
  s.legislator_ids = manifest.at("legislators").get<std::vector<std::string>>();
  s.vote_ids = manifest.at("votes").get<std::vector<std::string>>();
  if (s.kind == ModelKind::Dynamic) {
    s.num_terms = manifest.at("num_terms");
    s.vote_terms = manifest.at("vote_terms").get<std::vector<int>>();
    for (const auto& w : manifest.at("tenure")) {
      s.tenure.push_back({w.at(0).get<int>(), w.at(1).get<int>()});
    }
    if (manifest.contains("mh_acceptance_rate")) {
      s.mh_acceptance_rate = manifest.at("mh_acceptance_rate");
    }
  }

  const std::size_t num_draws = manifest.at("num_draws");
  const int record = s.record_length();
  if (manifest.at("record_length").get<int>() != record) {
    throw validation_error("read_store: manifest record_length inconsistent");
  }

  std::ifstream bf(dir + "/draws.bin", std::ios::binary);
  if (!bf) throw not_found_error("missing draws: " + dir + "/draws.bin");
  std::string bytes((std::istreambuf_iterator<char>(bf)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() != num_draws * record * 8) {
    throw validation_error("read_store: draws.bin has unexpected size");
  }

  const int beta_len = record - 5 * s.num_votes() - (s.kind == ModelKind::Dynamic ? 1 : 0);
  const char* p = bytes.data();
  s.draws.resize(num_draws);
  for (auto& d : s.draws) {
    d.beta.resize(beta_len);
    for (int k = 0; k < beta_len; ++k) d.beta(k) = take_double(p);
    d.items.resize(s.num_votes());
    for (auto& item : d.items) {
      item.alpha1 = take_double(p);
      item.alpha2 = take_double(p);
      item.delta1 = take_double(p);
      item.delta2 = take_double(p);
      item.z = take_double(p) > 0.0 ? +1 : -1;
    }
    if (s.kind == ModelKind::Dynamic) d.rho = take_double(p);
  }
  s.validate();
  return s;
}

}  // namespace unfold
