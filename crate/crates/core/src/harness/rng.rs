use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent uses of randomness within a campaign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Agents = 1,
    Arrivals = 2,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for `(seed, purpose, trial, draw)`. The first three select the
/// key, `draw` selects the ChaCha stream, so every draw is reproducible on
/// its own regardless of scheduling.
pub fn stream(seed: u64, purpose: Purpose, trial: u64, draw: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut h = splitmix(seed);
    for (i, chunk) in key.chunks_mut(8).enumerate() {
        h = splitmix(h ^ (purpose as u64).rotate_left(17) ^ trial.rotate_left(i as u32 * 13 + 1));
        chunk.copy_from_slice(&h.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(draw);
    rng
}
