use rand::Rng;

use super::LedgerError;

/// Draws an ordered `(payer, payee)` pair, uniform over all `n (n - 1)`
/// ordered pairs of distinct agents.
pub fn draw_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<(usize, usize), LedgerError> {
    if n < 2 {
        return Err(LedgerError::InvalidPopulation(n));
    }
    let payer = rng.random_range(0..n);
    let mut payee = rng.random_range(0..n - 1);
    if payee >= payer {
        payee += 1;
    }
    Ok((payer, payee))
}
