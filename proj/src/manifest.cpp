#include "spbwe/manifest.hpp"

#include <filesystem>
#include <sstream>

#include "spbwe/errors.hpp"
#include "spbwe/text_io.hpp"

namespace spbwe {

PipelineManifest PipelineManifest::load(const std::string& path) {
  PipelineManifest m;
  if (!std::filesystem::exists(path)) return m;
  try {
    m.data_ = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid manifest JSON: " + e.what());
  }
  if (!m.data_.contains("artifacts") || !m.data_.contains("stages"))
    throw ValidationError(path + ": manifest misses artifacts/stages");
  return m;
}

void PipelineManifest::save(const std::string& path) const {
  atomic_write(path, data_.dump(2) + "\n");
}

void PipelineManifest::check_inputs(const std::string& stage,
                                    const std::vector<std::string>& inputs) const {
  const auto& artifacts = data_.at("artifacts");
  for (const auto& path : inputs) {
    if (!std::filesystem::exists(path)) {
      std::string hint;
      if (artifacts.contains(path))
        hint = "; rerun stage '" + artifacts.at(path).at("producer").get<std::string>() + "'";
      throw IoError("stage '" + stage + "' misses input " + path + hint);
    }
    if (artifacts.contains(path)) {
      std::string recorded = artifacts.at(path).at("digest").get<std::string>();
      std::string current = digest_file(path);
      if (recorded != current) {
        std::string producer = artifacts.at(path).at("producer").get<std::string>();
        throw StaleInputError("stage '" + stage + "': input " + path +
                              " no longer matches the manifest (digest " + current + " vs " +
                              recorded + "); rerun stage '" + producer + "'");
      }
    }
  }
}

void PipelineManifest::record_stage(const std::string& stage, const nlohmann::json& params,
                                    const std::vector<std::string>& inputs,
                                    const std::vector<std::string>& outputs) {
  nlohmann::json in = nlohmann::json::object(), out = nlohmann::json::object();
  for (const auto& p : inputs) in[p] = digest_file(p);
  for (const auto& p : outputs) {
    std::string dg = digest_file(p);
    out[p] = dg;
    data_["artifacts"][p] = {{"digest", dg}, {"producer", stage}};
  }
  data_["stages"][stage] = {{"params", params}, {"inputs", in}, {"outputs", out}};
}

std::string PipelineManifest::report() const {
  std::ostringstream os;
  const auto& stages = data_.at("stages");
  const auto& artifacts = data_.at("artifacts");
  if (stages.empty()) {
    os << "manifest is empty\n";
    return os.str();
  }
  for (auto it = stages.begin(); it != stages.end(); ++it) {
    os << "stage " << it.key() << "\n";
    os << "  params " << it.value().at("params").dump() << "\n";
    for (const char* kind : {"inputs", "outputs"}) {
      for (auto f = it.value().at(kind).begin(); f != it.value().at(kind).end(); ++f) {
        std::string status = "missing";
        if (std::filesystem::exists(f.key()))
          status = digest_file(f.key()) == f.value().get<std::string>() ? "fresh" : "STALE";
        os << "  " << kind[0] << "  " << f.key() << "  " << status << "\n";
      }
    }
  }
  os << artifacts.size() << " artifact(s) tracked\n";
  return os.str();
}

}  // namespace spbwe
