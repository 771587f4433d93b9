//! Stable fingerprints of state vectors for traces.

use crate::statevec::StateVector;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over amplitudes quantized to 1e-9, so rounding noise below that
/// level does not change the value.
pub fn state_checksum(state: &StateVector) -> u64 {
    let mut h = FNV_OFFSET;
    let mut feed = |x: i64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    };
    feed(state.num_qubits() as i64);
    for a in state.amplitudes() {
        feed(libm::round(a.re * 1e9) as i64);
        feed(libm::round(a.im * 1e9) as i64);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::Gate;

    #[test]
    fn checksum_is_deterministic_and_discriminates() {
        let a = StateVector::zero(3).unwrap();
        let mut b = a.clone();
        assert_eq!(state_checksum(&a), state_checksum(&b));
        b.apply_gate(&Gate::X(2)).unwrap();
        assert_ne!(state_checksum(&a), state_checksum(&b));
    }
}
