#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tabclust/autoenc/autoencoder.hpp"

namespace tabclust::autoenc {

inline constexpr int kCheckpointVersion = 1;

// {"format": "tabclust-autoencoder", "version": 1, "spec": {...},
//  "conv_encoder": [...] | null, "encoder": [...], "decoder": [...], "conv_decoder": [...] | null}
// Doubles are written in shortest round-trip form, so load(save(ae)) == ae bit for bit.
nlohmann::json to_json(const Autoencoder& ae);
Autoencoder autoencoder_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const AutoencoderSpec& spec);
AutoencoderSpec spec_from_json(const nlohmann::json& j);

void save_checkpoint(const Autoencoder& ae, const std::filesystem::path& path);
Autoencoder load_checkpoint(const std::filesystem::path& path);

}  // namespace tabclust::autoenc
