//! The concatenated code: graph-code encoding of one qubit into five,
//! followed by the block encoding of those five into fifteen.
//!
//! Decoding runs in the opposite order: erasure recovery into the fresh
//! block, syndrome extraction on the recovered five qubits, table lookup and
//! correction of the data qubit.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ErrorPlacement, NoiseScenario, ScenarioSpace};
use crate::checksum::state_checksum;
use crate::graph_code::{
    apply_correction, build_encoder, build_syndrome_decoder, five_qubit_decoder_phase,
    generate_syndrome_table, CorrectionOp, GraphAdjacency, GraphEncoder, Syndrome, SyndromeDecoder,
    SyndromeTable, CODE_LENGTH, SYNDROME_BITS,
};
use crate::linalg::CMatrix;
use crate::qlcc::{self, ErasureFlagSet, QlccParams, ENCODED_QUBITS, RECOVERY_BLOCK};
use crate::statevec::{StateVector, BLOCK_SIZE};
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// External graph code composed with the internal block code.
#[derive(Clone, Debug)]
pub struct ConcatCode {
    encoder: GraphEncoder,
    decoder: SyndromeDecoder,
    table: SyndromeTable,
    internal: QlccParams,
}

impl ConcatCode {
    pub fn new(
        encoder: GraphEncoder,
        decoder: SyndromeDecoder,
        table: SyndromeTable,
        internal: QlccParams,
    ) -> Result<Self> {
        if encoder.output_qubits() != internal.data_qubits {
            return Err(Error::InvalidArgument(alloc::format!(
                "external code emits {} qubits, internal code takes {}",
                encoder.output_qubits(),
                internal.data_qubits
            )));
        }
        Ok(Self {
            encoder,
            decoder,
            table,
            internal,
        })
    }

    /// `[[5,1,3]]` graph code inside the `k = 5, t = 2` block code, with the
    /// syndrome table regenerated from scratch.
    pub fn standard() -> Result<Self> {
        let encoder = build_encoder(&GraphAdjacency::five_qubit_code())?;
        let decoder = build_syndrome_decoder(&five_qubit_decoder_phase())?;
        let table = generate_syndrome_table(&encoder, &decoder)?;
        Self::new(encoder, decoder, table, QlccParams::default())
    }

    pub fn encoder(&self) -> &GraphEncoder {
        &self.encoder
    }

    pub fn decoder(&self) -> &SyndromeDecoder {
        &self.decoder
    }

    pub fn table(&self) -> &SyndromeTable {
        &self.table
    }

    pub fn internal(&self) -> &QlccParams {
        &self.internal
    }

    /// `(k/M, M/N, k/N)`.
    pub fn rates(&self) -> (f64, f64, f64) {
        let k = self.encoder.input_qubits() as f64;
        let m = self.encoder.output_qubits() as f64;
        let n = self.internal.physical_qubits() as f64;
        (k / m, m / n, k / n)
    }

    /// One data qubit to the 15-qubit encoded register.
    pub fn encode(&self, input: &StateVector) -> Result<StateVector> {
        if input.num_qubits() != 1 {
            return Err(Error::InvalidArgument(alloc::format!(
                "the concatenated code encodes 1 qubit, got {}",
                input.num_qubits()
            )));
        }
        qlcc::encode(&self.encoder.encode(input)?)
    }

    /// Recovers erasures at `flags`, reads the syndrome and corrects.
    pub fn decode(&self, state15: &StateVector, flags: &ErasureFlagSet) -> Result<Decoded> {
        let recovered = qlcc::decode_and_recover(state15, flags)?;
        let (syndrome, data) = self.decoder.decode_and_extract(&recovered.state)?;
        let correction = self
            .table
            .lookup(syndrome)
            .map(|row| row.correction.clone())
            .ok_or_else(|| Error::CodeProperty(alloc::format!("no table row for {syndrome}")))?;
        let state = apply_correction(&data, &correction)?;
        Ok(Decoded {
            syndrome,
            correction,
            state,
            recovery_purity: recovered.purity,
        })
    }

    /// Full round trip of `input` through `scenario`; returns the decode and
    /// the fidelity with the input.
    pub fn run(&self, input: &StateVector, scenario: &NoiseScenario) -> Result<(Decoded, f64)> {
        let noisy = scenario.apply(&self.encode(input)?)?;
        let decoded = self.decode(&noisy, &scenario.decoder_view()?)?;
        let fidelity = decoded.state.fidelity(input)?;
        Ok((decoded, fidelity))
    }
}

/// Result of [`ConcatCode::decode`].
#[derive(Clone, Debug)]
pub struct Decoded {
    pub syndrome: Syndrome,
    pub correction: CorrectionOp,
    /// Corrected data qubit.
    pub state: StateVector,
    pub recovery_purity: f64,
}

/// `|0>`, `|1>` and `(|0> + e^{iπ/4}|1>)/√2`.
pub fn standard_probes() -> Vec<StateVector> {
    let phase = Complex64::from_polar(FRAC_1_SQRT_2, core::f64::consts::FRAC_PI_4);
    alloc::vec![
        StateVector::from_index(1, 0).expect("1 qubit"),
        StateVector::from_index(1, 1).expect("1 qubit"),
        StateVector::from_amplitudes(1, alloc::vec![Complex64::new(FRAC_1_SQRT_2, 0.0), phase])
            .expect("normalized"),
    ]
}

/// Outcome of one scenario over all probes.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioOutcome {
    pub index: usize,
    pub scenario: NoiseScenario,
    /// Whether the scenario counts towards the pass/fail verdict.
    pub asserted: bool,
    /// Syndrome seen with the first probe, if decoding got that far.
    pub syndrome: Option<Syndrome>,
    /// Minimum fidelity over probes; 0 when decoding failed.
    pub fidelity: f64,
    /// Decoding error, if any.
    pub error: Option<String>,
}

impl ScenarioOutcome {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.error.is_none() && self.fidelity >= 1.0 - tolerance
    }
}

/// Runs scenarios against a fixed set of probe inputs whose encodings are
/// computed once.
#[derive(Clone, Debug)]
pub struct Verifier {
    code: ConcatCode,
    probes: Vec<StateVector>,
    encoded: Vec<StateVector>,
}

impl Verifier {
    pub fn new(code: ConcatCode, probes: Vec<StateVector>) -> Result<Self> {
        if probes.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one probe state is needed".into(),
            ));
        }
        let encoded = probes
            .iter()
            .map(|p| code.encode(p))
            .collect::<Result<_>>()?;
        Ok(Self {
            code,
            probes,
            encoded,
        })
    }

    pub fn code(&self) -> &ConcatCode {
        &self.code
    }

    pub fn probes(&self) -> &[StateVector] {
        &self.probes
    }

    /// Same-block erasures and errors that share a block with an erasure are
    /// run but not asserted.
    pub fn is_asserted(scenario: &NoiseScenario) -> bool {
        !scenario.has_same_block_erasures() && !scenario.error_in_damaged_block()
    }

    fn min_fidelity(&self, scenario: &NoiseScenario) -> Result<(Syndrome, f64)> {
        let flags = scenario.decoder_view()?;
        let mut syndrome = None;
        let mut worst = f64::INFINITY;
        for (probe, encoded) in self.probes.iter().zip(&self.encoded) {
            let decoded = self.code.decode(&scenario.apply(encoded)?, &flags)?;
            syndrome.get_or_insert(decoded.syndrome);
            worst = worst.min(decoded.state.fidelity(probe)?);
        }
        Ok((syndrome.expect("at least one probe"), worst))
    }

    pub fn evaluate(&self, index: usize, scenario: &NoiseScenario) -> ScenarioOutcome {
        let (syndrome, fidelity, error) = match self.min_fidelity(scenario) {
            Ok((s, f)) => (Some(s), f, None),
            Err(e) => (None, 0.0, Some(e.to_string())),
        };
        ScenarioOutcome {
            index,
            scenario: scenario.clone(),
            asserted: Self::is_asserted(scenario),
            syndrome,
            fidelity,
            error,
        }
    }
}

/// One failing scenario in a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub index: usize,
    pub scenario: NoiseScenario,
    pub asserted: bool,
    pub syndrome: Option<Syndrome>,
    pub fidelity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Aggregate of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub t: usize,
    pub s: usize,
    pub constraint: ErrorPlacement,
    pub same_block: bool,
    pub tolerance: f64,
    pub total: usize,
    pub passed: usize,
    pub asserted_total: usize,
    pub asserted_passed: usize,
    pub min_fidelity: f64,
    pub failures: Vec<Failure>,
    /// Seconds; filled in by callers that have a clock. Not serialized so
    /// reports stay byte-identical between runs.
    #[serde(skip)]
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    /// Builds the report from outcomes in any order; entries are merged by
    /// scenario index.
    pub fn from_outcomes(
        space: &ScenarioSpace,
        tolerance: f64,
        mut outcomes: Vec<ScenarioOutcome>,
    ) -> Self {
        outcomes.sort_by_key(|o| o.index);
        let mut report = Self {
            t: space.t(),
            s: space.s(),
            constraint: space.placement(),
            same_block: space.same_block(),
            tolerance,
            total: outcomes.len(),
            passed: 0,
            asserted_total: 0,
            asserted_passed: 0,
            min_fidelity: 1.0,
            failures: Vec::new(),
            wall_time: None,
        };
        for o in outcomes {
            let ok = o.passed(tolerance);
            report.min_fidelity = report.min_fidelity.min(o.fidelity);
            report.passed += ok as usize;
            if o.asserted {
                report.asserted_total += 1;
                report.asserted_passed += ok as usize;
            }
            if !ok {
                report.failures.push(Failure {
                    index: o.index,
                    scenario: o.scenario,
                    asserted: o.asserted,
                    syndrome: o.syndrome,
                    fidelity: o.fidelity,
                    error: o.error,
                });
            }
        }
        report
    }

    /// True when every asserted scenario passed.
    pub fn all_asserted_pass(&self) -> bool {
        self.asserted_passed == self.asserted_total
    }
}

/// Sequential sweep over `space`.
pub fn verify(verifier: &Verifier, space: &ScenarioSpace, tolerance: f64) -> VerificationReport {
    let outcomes = space
        .scenarios()
        .iter()
        .enumerate()
        .map(|(i, s)| verifier.evaluate(i, s))
        .collect();
    VerificationReport::from_outcomes(space, tolerance, outcomes)
}

/// Milestones of the reference scenario run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleTrace {
    pub scenario: NoiseScenario,
    pub encoded_checksum: String,
    pub noisy_checksum: String,
    pub recovery_purity: f64,
    pub syndrome: Syndrome,
    pub correction: CorrectionOp,
    pub fidelity: f64,
}

/// Syndrome expected for the reference scenario.
pub const EXAMPLE_SYNDROME: u8 = 0b0110;

fn milestone(stage: &'static str, detail: String) -> Error {
    Error::Milestone { stage, detail }
}

/// Runs [`NoiseScenario::reference`] on `input` and checks each milestone:
/// block 3 factors out, syndrome `0110`, correction `S5`, and final fidelity
/// at least `1 - tolerance`.
pub fn run_worked_example(
    code: &ConcatCode,
    input: &StateVector,
    tolerance: f64,
) -> Result<ExampleTrace> {
    let scenario = NoiseScenario::reference();
    let encoded = code.encode(input)?;
    let noisy = scenario.apply(&encoded)?;
    let decoded = code
        .decode(&noisy, &scenario.decoder_view()?)
        .map_err(|e| milestone("decode", e.to_string()))?;
    if decoded.syndrome.value() != EXAMPLE_SYNDROME {
        return Err(milestone(
            "syndrome",
            alloc::format!("got {}, expected 0110", decoded.syndrome),
        ));
    }
    let expected: CorrectionOp = "S5".parse()?;
    if decoded.correction != expected {
        return Err(milestone(
            "correction",
            alloc::format!("got {}, expected S5", decoded.correction),
        ));
    }
    let fidelity = decoded.state.fidelity(input)?;
    if fidelity < 1.0 - tolerance {
        return Err(milestone(
            "fidelity",
            alloc::format!("{fidelity:.12} below 1 - {tolerance:e}"),
        ));
    }
    Ok(ExampleTrace {
        scenario,
        encoded_checksum: alloc::format!("{:016x}", state_checksum(&encoded)),
        noisy_checksum: alloc::format!("{:016x}", state_checksum(&noisy)),
        recovery_purity: decoded.recovery_purity,
        syndrome: decoded.syndrome,
        correction: decoded.correction,
        fidelity,
    })
}

/// Sends half of `(|00> + |11>)/√2` through `scenario` and returns the joint
/// fidelity of the decoded pair with the original.
///
/// The untouched reference qubit is register qubit 0 throughout, so the
/// recovery runs on 21 qubits.
pub fn entanglement_fidelity(code: &ConcatCode, scenario: &NoiseScenario) -> Result<f64> {
    let e0 = code.encode(&StateVector::from_index(1, 0)?)?;
    let e1 = code.encode(&StateVector::from_index(1, 1)?)?;
    let half = ENCODED_QUBITS;
    let amps: Vec<Complex64> = e0
        .amplitudes()
        .iter()
        .chain(e1.amplitudes())
        .map(|a| a * FRAC_1_SQRT_2)
        .collect();
    let mut state = StateVector::from_amplitudes(half + 1, amps)?;

    state.apply_circuit(
        &scenario
            .gates()?
            .iter()
            .map(|g| g.shifted(1))
            .collect::<Vec<_>>(),
    )?;
    let mut wide = state.tensor(&StateVector::zero(BLOCK_SIZE)?)?;
    let circuit = qlcc::recovery_circuit(&scenario.decoder_view()?)?;
    wide.apply_circuit(&circuit.iter().map(|g| g.shifted(1)).collect::<Vec<_>>())?;

    let start = 1 + RECOVERY_BLOCK * BLOCK_SIZE;
    let mut keep = alloc::vec![0];
    keep.extend(start..start + BLOCK_SIZE);
    let (pair_block, purity) = wide.extract_subsystem(&keep)?;
    if purity < 1.0 - DEFAULT_TOLERANCE {
        return Err(Error::RecoveryFailure { purity });
    }

    let t = code.decoder().matrix();
    let dim = 1 << CODE_LENGTH;
    let lifted = CMatrix::from_fn(2 * dim, 2 * dim, |r, c| {
        if r / dim == c / dim {
            t.get(r % dim, c % dim)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let decoded = lifted.apply(&pair_block)?;
    let syndrome_qubits: Vec<usize> = (1..=SYNDROME_BITS).collect();
    let (bits, post) = decoded.measure_deterministic(&syndrome_qubits)?;
    let base = (bits.value() as usize) << 1;
    let pair = StateVector::from_amplitudes(
        2,
        alloc::vec![
            post.amplitude(base),
            post.amplitude(base | 1),
            post.amplitude(dim | base),
            post.amplitude(dim | base | 1),
        ],
    )?;
    let syndrome = Syndrome::new(bits.value() as u8)?;
    let row = code
        .table()
        .lookup(syndrome)
        .ok_or_else(|| Error::CodeProperty(alloc::format!("no table row for {syndrome}")))?;
    let mut corrected = pair;
    corrected.apply_circuit(&row.correction.gates(1))?;

    let bell = StateVector::from_amplitudes(
        2,
        alloc::vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ],
    )?;
    corrected.fidelity(&bell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{LocatedPauli, Pauli};
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn code() -> ConcatCode {
        ConcatCode::standard().unwrap()
    }

    #[test]
    fn rates() {
        let (r_ext, r_int, r) = code().rates();
        assert!((r_ext - 0.2).abs() < 1e-15);
        assert!((r_int - 1.0 / 3.0).abs() < 1e-15);
        assert!((r - 1.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn encoded_basis_states_are_orthonormal() {
        let c = code();
        let e0 = c.encode(&StateVector::from_index(1, 0).unwrap()).unwrap();
        let e1 = c.encode(&StateVector::from_index(1, 1).unwrap()).unwrap();
        assert!((e0.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(e0.inner(&e1).unwrap().norm() < 1e-10);
        assert!(c.encode(&StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn encoding_of_zero_has_expected_logical_weights() {
        // with c(0) = 1, c(1) = 0 every logical GHZ component carries
        // amplitude ±1/√32 (one sign per graph codeword)
        let c = code();
        let e0 = c.encode(&StateVector::from_index(1, 0).unwrap()).unwrap();
        for j in 0..32 {
            let overlap = qlcc::logical_basis_state(j).unwrap().inner(&e0).unwrap();
            assert!(
                (overlap.norm() - 32f64.sqrt().recip()).abs() < 1e-12,
                "component {j}"
            );
            assert!(overlap.im.abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_round_trips() {
        let c = code();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let x = StateVector::random(1, &mut rng).unwrap();
            let (decoded, f) = c.run(&x, &NoiseScenario::default()).unwrap();
            assert_eq!(decoded.syndrome.value(), 0);
            assert!(decoded.correction.is_none());
            assert!(f >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn worked_example_milestones() {
        let c = code();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = StateVector::random(1, &mut rng).unwrap();
        let trace = run_worked_example(&c, &x, 1e-12).unwrap();
        assert_eq!(trace.syndrome.to_string(), "0110");
        assert_eq!(trace.correction.to_string(), "S5");
        assert!(trace.fidelity >= 1.0 - 1e-12);
        assert!(trace.recovery_purity >= 1.0 - 1e-9);
        assert_ne!(trace.encoded_checksum, trace.noisy_checksum);
    }

    #[test]
    fn erasure_paulis_do_not_matter() {
        let c = code();
        let v = Verifier::new(c, standard_probes()).unwrap();
        for x1 in Pauli::ALL {
            for x2 in Pauli::ALL {
                let sc = NoiseScenario::new(
                    vec![LocatedPauli::new(0, 3, x1), LocatedPauli::new(2, 5, x2)],
                    vec![],
                );
                let out = v.evaluate(0, &sc);
                assert!(out.passed(1e-9), "{sc}: {out:?}");
            }
        }
    }

    #[test]
    fn report_counts_are_consistent() {
        let c = code();
        let v = Verifier::new(c, standard_probes()).unwrap();
        let space = ScenarioSpace::new(0, 0, ErrorPlacement::UndamagedBlock, false).unwrap();
        let report = verify(&v, &space, 1e-9);
        assert_eq!((report.total, report.passed), (1, 1));
        assert!(report.all_asserted_pass());

        let fake = |index, fidelity, asserted| ScenarioOutcome {
            index,
            scenario: NoiseScenario::default(),
            asserted,
            syndrome: None,
            fidelity,
            error: None,
        };
        let r = VerificationReport::from_outcomes(
            &space,
            1e-9,
            vec![fake(2, 0.5, false), fake(0, 1.0, true), fake(1, 0.25, true)],
        );
        assert_eq!(r.total, 3);
        assert_eq!(r.passed + r.failures.len(), r.total);
        assert_eq!((r.asserted_total, r.asserted_passed), (2, 1));
        assert_eq!(r.min_fidelity, 0.25);
        assert_eq!(
            r.failures.iter().map(|f| f.index).collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert!(!r.all_asserted_pass());
    }

    #[test]
    fn decode_failures_become_data() {
        let c = code();
        let v = Verifier::new(c, standard_probes()).unwrap();
        // three erasures leave no intact block
        let sc = NoiseScenario::new(
            vec![
                LocatedPauli::new(0, 1, Pauli::X),
                LocatedPauli::new(1, 1, Pauli::X),
                LocatedPauli::new(2, 1, Pauli::X),
            ],
            vec![],
        );
        let out = v.evaluate(7, &sc);
        assert!(!out.passed(1e-9));
        assert!(out.error.is_some());
    }

    #[test]
    fn bell_pair_survives_reference_erasures() {
        let c = code();
        let sc = NoiseScenario::new(NoiseScenario::reference().erasures, vec![]);
        assert!(entanglement_fidelity(&c, &sc).unwrap() >= 1.0 - 1e-9);
    }
}
