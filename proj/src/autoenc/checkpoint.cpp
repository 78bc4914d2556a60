#include "tabclust/autoenc/checkpoint.hpp"

#include <fstream>

#include "tabclust/errors.hpp"

namespace tabclust::autoenc {

using nlohmann::json;

namespace {

json matrix_json(const DenseMatrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

DenseMatrix matrix_from(const json& j) {
    return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                       j.at("values").get<std::vector<double>>());
}

json mlp_json(const numkit::MlpParams& p) {
    json layers = json::array();
    for (const auto& l : p.layers) {
        layers.push_back({{"weight", matrix_json(l.weight)},
                          {"bias", l.bias},
                          {"activation", std::string(numkit::to_string(l.activation))}});
    }
    return layers;
}

numkit::MlpParams mlp_from(const json& j) {
    numkit::MlpParams p;
    for (const auto& l : j) {
        p.layers.push_back({matrix_from(l.at("weight")), l.at("bias").get<std::vector<double>>(),
                            numkit::parse_activation(l.at("activation").get<std::string>())});
    }
    p.validate();
    return p;
}

json conv_json(const std::optional<numkit::Conv1dParams>& p) {
    if (!p) return nullptr;
    json layers = json::array();
    for (const auto& l : p->layers) {
        layers.push_back({{"in_channels", l.in_channels},
                          {"out_channels", l.out_channels},
                          {"kernel_width", l.kernel_width},
                          {"stride", l.stride},
                          {"kernel", l.kernel},
                          {"bias", l.bias},
                          {"activation", std::string(numkit::to_string(l.activation))},
                          {"transposed", l.transposed},
                          {"output_padding", l.output_padding}});
    }
    return layers;
}

std::optional<numkit::Conv1dParams> conv_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    numkit::Conv1dParams p;
    for (const auto& l : j) {
        numkit::Conv1dLayer c;
        c.in_channels = l.at("in_channels").get<std::size_t>();
        c.out_channels = l.at("out_channels").get<std::size_t>();
        c.kernel_width = l.at("kernel_width").get<std::size_t>();
        c.stride = l.at("stride").get<std::size_t>();
        c.kernel = l.at("kernel").get<std::vector<double>>();
        c.bias = l.at("bias").get<std::vector<double>>();
        c.activation = numkit::parse_activation(l.at("activation").get<std::string>());
        c.transposed = l.at("transposed").get<bool>();
        c.output_padding = l.at("output_padding").get<std::size_t>();
        p.layers.push_back(std::move(c));
    }
    p.validate();
    return p;
}

}  // namespace

json spec_to_json(const AutoencoderSpec& spec) {
    json j{{"input_dim", spec.input_dim},
           {"encoder_widths", spec.encoder_widths},
           {"embedding_dim", spec.embedding_dim},
           {"decoder_widths", spec.decoder_widths},
           {"kind", spec.kind == AutoencoderKind::mlp ? "mlp" : "conv1d_front"},
           {"conv_plan", nullptr}};
    if (spec.conv_plan) {
        json layers = json::array();
        for (const auto& g : spec.conv_plan->layers) {
            layers.push_back({{"out_channels", g.out_channels},
                              {"kernel_width", g.kernel_width},
                              {"stride", g.stride},
                              {"activation", std::string(numkit::to_string(g.activation))}});
        }
        j["conv_plan"] = {{"layers", layers},
                          {"init", spec.conv_plan->init == ConvInit::glorot ? "glorot" : "identity"},
                          {"trainable", spec.conv_plan->trainable}};
    }
    return j;
}

AutoencoderSpec spec_from_json(const json& j) {
    AutoencoderSpec s;
    s.input_dim = j.at("input_dim").get<std::size_t>();
    s.encoder_widths = j.at("encoder_widths").get<std::vector<std::size_t>>();
    s.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    s.decoder_widths = j.at("decoder_widths").get<std::vector<std::size_t>>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "mlp") {
        s.kind = AutoencoderKind::mlp;
    } else if (kind == "conv1d_front") {
        s.kind = AutoencoderKind::conv1d_front;
    } else {
        throw DataError("checkpoint: unknown autoencoder kind '" + kind + "'");
    }
    const json& cp = j.at("conv_plan");
    if (!cp.is_null()) {
        ConvPlan plan;
        for (const auto& g : cp.at("layers")) {
            plan.layers.push_back({g.at("out_channels").get<std::size_t>(), g.at("kernel_width").get<std::size_t>(),
                                   g.at("stride").get<std::size_t>(),
                                   numkit::parse_activation(g.at("activation").get<std::string>())});
        }
        const auto init = cp.at("init").get<std::string>();
        if (init != "glorot" && init != "identity") throw DataError("checkpoint: unknown conv init '" + init + "'");
        plan.init = init == "glorot" ? ConvInit::glorot : ConvInit::identity;
        plan.trainable = cp.at("trainable").get<bool>();
        s.conv_plan = std::move(plan);
    }
    s.validate();
    return s;
}

json to_json(const Autoencoder& ae) {
    return {{"format", "tabclust-autoencoder"},
            {"version", kCheckpointVersion},
            {"spec", spec_to_json(ae.spec)},
            {"conv_encoder", conv_json(ae.conv_encoder)},
            {"encoder", mlp_json(ae.encoder)},
            {"decoder", mlp_json(ae.decoder)},
            {"conv_decoder", conv_json(ae.conv_decoder)}};
}

Autoencoder autoencoder_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "tabclust-autoencoder") throw DataError("checkpoint: wrong format tag");
        const int version = j.at("version").get<int>();
        if (version != kCheckpointVersion) {
            throw DataError("checkpoint: unsupported version " + std::to_string(version));
        }
        Autoencoder ae;
        ae.spec = spec_from_json(j.at("spec"));
        ae.conv_encoder = conv_from(j.at("conv_encoder"));
        ae.encoder = mlp_from(j.at("encoder"));
        ae.decoder = mlp_from(j.at("decoder"));
        ae.conv_decoder = conv_from(j.at("conv_decoder"));
        if (ae.encoder.out_dim() != ae.spec.embedding_dim || ae.decoder.out_dim() != ae.spec.flattened_dim()) {
            throw DataError("checkpoint: parameters do not match the stored spec");
        }
        return ae;
    } catch (const json::exception& e) {
        throw DataError(std::string("checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Autoencoder& ae, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << to_json(ae).dump() << '\n';
}

Autoencoder load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("checkpoint '" + path.string() + "': " + e.what());
    }
    return autoencoder_from_json(j);
}

}  // namespace tabclust::autoenc
