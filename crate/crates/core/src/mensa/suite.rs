use crate::layer::{LayerDescriptor, LayerKind};

use super::ModelGraph;

fn layer(name: &str, kind: LayerKind, macs: f64, params: f64, acts: f64) -> LayerDescriptor {
    LayerDescriptor::derived(name, kind, macs, params, acts)
}

/// Speech-style recurrent model dominated by large gate matrices.
pub fn lstm_heavy() -> ModelGraph {
    use LayerKind::*;
    ModelGraph::chain(
        "lstm-heavy",
        vec![
            layer("embed", Fc, 5e5, 5e5, 8e3),
            layer("lstm0_gates", LstmGate, 6e6, 6e6, 16e3),
            layer("lstm1_gates", LstmGate, 6e6, 6e6, 16e3),
            layer("lstm2_gates", LstmGate, 6e6, 6e6, 16e3),
            layer("lstm3_gates", LstmGate, 6e6, 6e6, 16e3),
            layer("projection", Fc, 2e6, 2e6, 8e3),
            layer("classifier", Fc, 6.4e4, 6.4e4, 2e3),
        ],
    )
}

/// Image classifier: compute-heavy convolutions and one wide classifier.
pub fn cnn_heavy() -> ModelGraph {
    use LayerKind::*;
    ModelGraph::chain(
        "cnn-heavy",
        vec![
            layer("conv1", Conv, 1e8, 2e4, 2e5),
            layer("conv2", Conv, 2e8, 1.5e5, 2e5),
            layer("dwconv3", Conv, 2e6, 2e4, 1e5),
            layer("conv4", Conv, 1.5e8, 4e5, 1e5),
            layer("pwconv5", Conv, 3e5, 3e4, 5e4),
            layer("fc6", Fc, 1.6e7, 1.6e7, 4e3),
            layer("fc7", Fc, 1e6, 1e6, 2e3),
        ],
    )
}

/// Recurrent-convolutional model spanning every family.
pub fn mixed() -> ModelGraph {
    use LayerKind::*;
    ModelGraph::chain(
        "mixed",
        vec![
            layer("conv1", Conv, 8e7, 3e4, 2e5),
            layer("dwconv2", Conv, 1.5e6, 1.5e4, 1e5),
            layer("conv3", Conv, 1.2e8, 3e5, 1e5),
            layer("pwconv4", Conv, 2e5, 2.5e4, 3e4),
            layer("lstm_gates", LstmGate, 8e6, 8e6, 16e3),
            layer("fc5", Fc, 5e6, 5e6, 4e3),
            layer("fc6", Fc, 1e5, 1e5, 1e3),
        ],
    )
}

pub fn synthetic_suite() -> Vec<ModelGraph> {
    vec![lstm_heavy(), cnn_heavy(), mixed()]
}
