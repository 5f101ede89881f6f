//! Model file encoding (little-endian).
//!
//! ```text
//! b"PSMD" | u16 version = 1 | u8 kind | u64 seed
//! scaler: vec mean | vec std
//! knn:    u32 k | u32 dim | vec rows (row-major) | ivec labels
//! logreg: f64 learning_rate | u32 epochs | f64 l2 | vec weights | f64 bias
//! svm:    f64 c | f64 learning_rate | u32 epochs | vec weights | f64 bias
//! rf:     u32 n_trees | u32 max_depth (u32::MAX = none) | u32 min_leaf
//!         | u32 features_per_split (0 = auto) | u32 bootstrap
//!         | u32 tree count, then per tree u32 node count and per node either
//!           u32 0 | f64 p0 | f64 p1                           (leaf)
//!           u32 1 | u32 feature | f64 threshold | u32 left | u32 right
//! mlp:    f64 learning_rate | u32 epochs | u32 layer count, then per layer
//!         u32 inputs | u32 outputs | vec weights | vec biases
//! ```
//!
//! `vec` is a u32 element count followed by f64 values, `ivec` a u32 count
//! followed by u32 values. Kind codes: knn 1, logreg 2, rf 3, mlp 4, svm 5.

use super::{
    ClassifierError, DecisionTree, ForestModel, ForestParams, KnnModel, Layer, LinearModel, LogRegParams, MlpModel,
    MlpParams, ModelBody, ModelKind, Node, Result, StandardScaler, SvmParams, TrainedModel,
};

pub const MODEL_MAGIC: &[u8; 4] = b"PSMD";
pub const MODEL_VERSION: u16 = 1;

struct Writer(Vec<u8>);

impl Writer {
    fn u32(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u32).to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn vec(&mut self, v: &[f64]) {
        self.u32(v.len());
        v.iter().for_each(|&x| self.f64(x));
    }
}

pub(crate) fn encode(m: &TrainedModel) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MODEL_MAGIC);
    w.0.extend_from_slice(&MODEL_VERSION.to_le_bytes());
    w.0.push(m.kind().code());
    w.0.extend_from_slice(&m.seed.to_le_bytes());
    w.vec(&m.scaler.mean);
    w.vec(&m.scaler.std);
    match &m.body {
        ModelBody::Knn(k) => {
            w.u32(k.k);
            w.u32(m.scaler.dim());
            w.vec(&k.rows.concat());
            w.u32(k.labels.len());
            k.labels.iter().for_each(|&l| w.u32(l as usize));
        }
        ModelBody::LogReg { params, model } => {
            w.f64(params.learning_rate);
            w.u32(params.epochs);
            w.f64(params.l2);
            w.vec(&model.weights);
            w.f64(model.bias);
        }
        ModelBody::LinearSvm { params, model } => {
            w.f64(params.c);
            w.f64(params.learning_rate);
            w.u32(params.epochs);
            w.vec(&model.weights);
            w.f64(model.bias);
        }
        ModelBody::RandomForest { params, model } => {
            w.u32(params.n_trees);
            w.u32(params.max_depth.map_or(u32::MAX as usize, |d| d));
            w.u32(params.min_leaf);
            w.u32(params.features_per_split.unwrap_or(0));
            w.u32(params.bootstrap as usize);
            w.u32(model.trees.len());
            for t in &model.trees {
                w.u32(t.nodes.len());
                for n in &t.nodes {
                    match n {
                        Node::Leaf { fractions } => {
                            w.u32(0);
                            w.f64(fractions[0]);
                            w.f64(fractions[1]);
                        }
                        Node::Split { feature, threshold, left, right } => {
                            w.u32(1);
                            w.u32(*feature);
                            w.f64(*threshold);
                            w.u32(*left);
                            w.u32(*right);
                        }
                    }
                }
            }
        }
        ModelBody::Mlp { params, model } => {
            w.f64(params.learning_rate);
            w.u32(params.epochs);
            w.u32(model.layers.len());
            for l in &model.layers {
                w.u32(l.inputs);
                w.u32(l.outputs);
                w.vec(&l.weights);
                w.vec(&l.biases);
            }
        }
    }
    w.0
}

fn corrupt(msg: impl Into<String>) -> ClassifierError {
    ClassifierError::CorruptModel(msg.into())
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| corrupt("truncated"))?;
        let s = &self.buf[self.at..end];
        self.at = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn vec(&mut self) -> Result<Vec<f64>> {
        let n = self.u32()?;
        let bytes = self.take(n.checked_mul(8).ok_or_else(|| corrupt("length overflow"))?)?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
    fn vec_of(&mut self, len: usize, what: &str) -> Result<Vec<f64>> {
        let v = self.vec()?;
        if v.len() != len {
            return Err(corrupt(format!("{what}: expected {len} values, found {}", v.len())));
        }
        Ok(v)
    }
}

pub(crate) fn decode(bytes: &[u8]) -> Result<TrainedModel> {
    if bytes.len() < 6 || &bytes[..4] != MODEL_MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != MODEL_VERSION {
        return Err(ClassifierError::VersionMismatch(version));
    }
    let mut r = Reader { buf: bytes, at: 6 };
    let code = r.take(1)?[0];
    let kind = ModelKind::from_code(code).ok_or_else(|| corrupt(format!("unknown kind code {code}")))?;
    let seed = u64::from_le_bytes(r.take(8)?.try_into().unwrap());
    let mean = r.vec()?;
    let dim = mean.len();
    let std = r.vec_of(dim, "scaler std")?;
    let scaler = StandardScaler { mean, std };
    let body = match kind {
        ModelKind::Knn => {
            let k = r.u32()?;
            if r.u32()? != dim {
                return Err(corrupt("knn dimensionality differs from scaler"));
            }
            let flat = r.vec()?;
            let n = r.u32()?;
            if dim == 0 || flat.len() != n * dim || k == 0 || k > n {
                return Err(corrupt("inconsistent knn section"));
            }
            let labels = (0..n)
                .map(|_| match r.u32()? {
                    l @ (0 | 1) => Ok(l as u8),
                    l => Err(corrupt(format!("label {l}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            ModelBody::Knn(KnnModel { k, rows: flat.chunks(dim).map(<[f64]>::to_vec).collect(), labels })
        }
        ModelKind::LogReg => {
            let params = LogRegParams { learning_rate: r.f64()?, epochs: r.u32()?, l2: r.f64()? };
            let weights = r.vec_of(dim, "weights")?;
            ModelBody::LogReg { params, model: LinearModel { weights, bias: r.f64()? } }
        }
        ModelKind::LinearSvm => {
            let params = SvmParams { c: r.f64()?, learning_rate: r.f64()?, epochs: r.u32()? };
            let weights = r.vec_of(dim, "weights")?;
            ModelBody::LinearSvm { params, model: LinearModel { weights, bias: r.f64()? } }
        }
        ModelKind::RandomForest => {
            let n_trees = r.u32()?;
            let max_depth = match r.u32()? {
                d if d == u32::MAX as usize => None,
                d => Some(d),
            };
            let min_leaf = r.u32()?;
            let features_per_split = match r.u32()? {
                0 => None,
                f => Some(f),
            };
            let bootstrap = r.u32()? != 0;
            let params = ForestParams { n_trees, max_depth, min_leaf, features_per_split, bootstrap };
            let count = r.u32()?;
            if count == 0 {
                return Err(corrupt("forest has no trees"));
            }
            let mut trees = Vec::new();
            for _ in 0..count {
                trees.push(read_tree(&mut r, dim)?);
            }
            ModelBody::RandomForest { params, model: ForestModel { trees } }
        }
        ModelKind::Mlp => {
            let learning_rate = r.f64()?;
            let epochs = r.u32()?;
            let count = r.u32()?;
            let mut layers = Vec::new();
            let mut expect = dim;
            for _ in 0..count {
                let inputs = r.u32()?;
                let outputs = r.u32()?;
                if inputs != expect || outputs == 0 {
                    return Err(corrupt("layer shapes do not chain"));
                }
                let weights = r.vec_of(inputs * outputs, "layer weights")?;
                let biases = r.vec_of(outputs, "layer biases")?;
                layers.push(Layer { inputs, outputs, weights, biases });
                expect = outputs;
            }
            if layers.len() < 2 || expect != 1 {
                return Err(corrupt("network must end in a single output"));
            }
            let hidden = layers[..layers.len() - 1].iter().map(|l| l.outputs).collect();
            ModelBody::Mlp { params: MlpParams { hidden, learning_rate, epochs }, model: MlpModel { layers } }
        }
    };
    if r.at != bytes.len() {
        return Err(corrupt("trailing bytes"));
    }
    Ok(TrainedModel { scaler, seed, body })
}

/// Children must point forward so that traversal always terminates.
fn read_tree(r: &mut Reader<'_>, dim: usize) -> Result<DecisionTree> {
    let n = r.u32()?;
    if n == 0 {
        return Err(corrupt("empty tree"));
    }
    let mut nodes = Vec::new();
    for i in 0..n {
        let node = match r.u32()? {
            0 => Node::Leaf { fractions: [r.f64()?, r.f64()?] },
            1 => {
                let (feature, threshold, left, right) = (r.u32()?, r.f64()?, r.u32()?, r.u32()?);
                if feature >= dim || left <= i || right <= i || left >= n || right >= n {
                    return Err(corrupt("split node out of range"));
                }
                Node::Split { feature, threshold, left, right }
            }
            t => return Err(corrupt(format!("node tag {t}"))),
        };
        nodes.push(node);
    }
    Ok(DecisionTree { nodes })
}
