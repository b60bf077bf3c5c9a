//! Decks with constant-time card lookup, and the two coupled steps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::group::Permutation;

/// A deck storing both position → card and card → position (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deck {
    cards: Vec<u16>,
    pos: Vec<u16>,
}

impl Deck {
    pub fn identity(n: usize) -> Self {
        let cards: Vec<u16> = (0..n as u16).collect();
        Deck { pos: cards.clone(), cards }
    }

    /// A uniformly random deck (Fisher–Yates).
    pub fn uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut cards: Vec<u16> = (0..n as u16).collect();
        cards.shuffle(rng);
        Deck::from_cards(cards)
    }

    fn from_cards(cards: Vec<u16>) -> Self {
        let mut pos = vec![0u16; cards.len()];
        for (i, &c) in cards.iter().enumerate() {
            pos[c as usize] = i as u16;
        }
        Deck { cards, pos }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        Deck::from_cards(p.as_zero_based().to_vec())
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_zero_based_unchecked(self.cards.clone())
    }

    pub fn n(&self) -> usize {
        self.cards.len()
    }

    /// Label (1-based) at 1-based position.
    pub fn card_at(&self, position: usize) -> usize {
        self.cards[position - 1] as usize + 1
    }

    /// 1-based position of a 1-based label.
    pub fn position_of(&self, card: usize) -> usize {
        self.pos[card - 1] as usize + 1
    }

    /// Right multiplication by `σ_l`: the top card goes to position `l`.
    pub fn insert_top_at(&mut self, l: usize) {
        self.cards[..l].rotate_left(1);
        self.reindex(l);
    }

    /// Right multiplication by `σ_l⁻¹`: the card at position `l` goes to the top.
    pub fn move_to_top(&mut self, l: usize) {
        self.cards[..l].rotate_right(1);
        self.reindex(l);
    }

    fn reindex(&mut self, upto: usize) {
        for i in 0..upto {
            self.pos[self.cards[i] as usize] = i as u16;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckPair {
    pub deck1: Deck,
    pub deck2: Deck,
    pub step: u64,
}

impl DeckPair {
    pub fn new(deck1: Deck, deck2: Deck) -> Self {
        assert_eq!(deck1.n(), deck2.n(), "decks of different sizes");
        DeckPair { deck1, deck2, step: 0 }
    }

    pub fn n(&self) -> usize {
        self.deck1.n()
    }

    pub fn coupled(&self) -> bool {
        self.deck1.cards == self.deck2.cards
    }

    /// Cards sitting at the same position in both decks.
    pub fn is_matched(&self, card: usize) -> bool {
        self.deck1.pos[card - 1] == self.deck2.pos[card - 1]
    }

    pub fn matched_count(&self) -> usize {
        self.deck1.cards.iter().zip(&self.deck2.cards).filter(|(a, b)| a == b).count()
    }
}

/// One step of the bottom-k-to-top coupling; both marginals follow `q*_{n,k}`.
///
/// Deck 1 moves a uniform card of its bottom `k` to the top. Deck 2 moves the
/// same card when that card is in its own bottom `k`, otherwise a uniform
/// card of its bottom `k` that is not in deck 1's bottom `k`.
pub fn bottom_k_to_top_step<R: Rng + ?Sized>(pair: &mut DeckPair, k: usize, rng: &mut R) {
    let n = pair.n();
    let lo = n - k + 1;
    let a = rng.random_range(lo..=n);
    let card = pair.deck1.card_at(a);
    let b = pair.deck2.position_of(card);
    let b = if b >= lo {
        b
    } else {
        let candidates: Vec<usize> =
            (lo..=n).filter(|&p| pair.deck1.position_of(pair.deck2.card_at(p)) < lo).collect();
        candidates[rng.random_range(0..candidates.len())]
    };
    pair.deck1.move_to_top(a);
    pair.deck2.move_to_top(b);
    pair.step += 1;
}

/// One step of the top-insert coupling; both marginals follow `q_{n,k}`.
///
/// A uniformly chosen leading deck inserts its top card `c` at a uniform
/// position `p` in the bottom `k`. The trailing deck inserts at `p`, except
/// when `c` sits at position `p*` in the trailing deck's bottom `k − 1`:
/// then `p = p*` maps to `p* − 1` and `p = p* − 1` maps to `p*`.
pub fn top_insert_couple_step<R: Rng + ?Sized>(pair: &mut DeckPair, k: usize, rng: &mut R) {
    let n = pair.n();
    let lead_first = rng.random_bool(0.5);
    let p = rng.random_range(n - k + 1..=n);
    let (leader, trailer) = if lead_first {
        (&mut pair.deck1, &mut pair.deck2)
    } else {
        (&mut pair.deck2, &mut pair.deck1)
    };
    let c = leader.card_at(1);
    let p_star = trailer.position_of(c);
    let q = if p_star >= n - k + 2 && p == p_star {
        p_star - 1
    } else if p_star >= n - k + 2 && p == p_star - 1 {
        p_star
    } else {
        p
    };
    leader.insert_top_at(p);
    trailer.insert_top_at(q);
    pair.step += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::rng::{stream, Purpose};

    #[test]
    fn deck_moves_match_group_convention() {
        let n = 9;
        let mut rng = stream(1, Purpose::Validity, 0);
        let mut deck = Deck::uniform(n, &mut rng);
        let mut perm = deck.to_permutation();
        for l in [3, 9, 1, 5, 7] {
            deck.insert_top_at(l);
            perm = &perm * &Permutation::cycle(l, n).unwrap();
            assert_eq!(deck.to_permutation(), perm);
            deck.move_to_top(l);
            perm = &perm * &Permutation::cycle(l, n).unwrap().inverse();
            assert_eq!(deck.to_permutation(), perm);
        }
        for c in 1..=n {
            assert_eq!(deck.card_at(deck.position_of(c)), c);
        }
    }

    #[test]
    fn equal_decks_stay_equal() {
        let mut rng = stream(2, Purpose::Validity, 0);
        let d = Deck::uniform(12, &mut rng);
        let mut a = DeckPair::new(d.clone(), d.clone());
        let mut b = a.clone();
        for _ in 0..500 {
            bottom_k_to_top_step(&mut a, 4, &mut rng);
            top_insert_couple_step(&mut b, 4, &mut rng);
            assert!(a.coupled() && b.coupled());
        }
    }

    #[test]
    fn shared_bottom_card_moves_in_both() {
        // Bottom k of both decks hold the same cards, so every pick is shared.
        let p1 = Permutation::from_one_line(&[1, 2, 3, 4, 5, 6]).unwrap();
        let p2 = Permutation::from_one_line(&[2, 1, 3, 6, 4, 5]).unwrap();
        let mut rng = stream(3, Purpose::Validity, 0);
        for _ in 0..50 {
            let mut pair = DeckPair::new(Deck::from_permutation(&p1), Deck::from_permutation(&p2));
            bottom_k_to_top_step(&mut pair, 3, &mut rng);
            assert_eq!(pair.deck1.card_at(1), pair.deck2.card_at(1));
        }
    }

    #[test]
    fn swap_rule() {
        // Deck 1 top card 1 sits at position 5 of deck 2 (its bottom k−1 = {4, 5}).
        let k = 3;
        let d1 = Deck::from_permutation(&Permutation::from_one_line(&[1, 2, 3, 4, 5]).unwrap());
        let d2 = Deck::from_permutation(&Permutation::from_one_line(&[2, 3, 4, 5, 1]).unwrap());
        let mut rng = stream(4, Purpose::Validity, 0);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..400 {
            let mut pair = DeckPair::new(d1.clone(), d2.clone());
            let before = pair.matched_count();
            top_insert_couple_step(&mut pair, k, &mut rng);
            assert!(pair.matched_count() >= before);
            // When deck 1 led and inserted card 1 at 5, deck 2 inserts at 4
            // and card 1 stays at 5 in both decks.
            if pair.deck1.position_of(1) == 5 && pair.deck2.card_at(4) == 2 {
                assert!(pair.is_matched(1));
                seen.insert("swap");
            }
        }
        assert!(seen.contains("swap"));
    }

    #[test]
    fn top_insert_never_breaks_matches() {
        let n = 10;
        let mut rng = stream(5, Purpose::Validity, 0);
        for k in 2..=n {
            let mut pair = DeckPair::new(Deck::identity(n), Deck::uniform(n, &mut rng));
            for _ in 0..2000 {
                let matched: Vec<usize> = (1..=n).filter(|&c| pair.is_matched(c)).collect();
                top_insert_couple_step(&mut pair, k, &mut rng);
                assert!(matched.iter().all(|&c| pair.is_matched(c)), "k = {k}");
            }
        }
    }
}
