use super::gazetteer::{phrase_words, Gazetteer, NormalizedLocation, PhraseMeaning};

enum Hit {
    State(String),
    City(Vec<usize>),
}

/// Resolves a free-text profile location to a US state (and city when one
/// can be pinned down).
///
/// Matching runs left to right over lowercase words, longest gazetteer
/// phrase first. State names and postal codes only match as whole words,
/// so "la" inside "atlanta" never fires. A phrase that is both a state and
/// a city (e.g. "LA") is resolved with the author's timezone; without a
/// deciding timezone the state reading wins. When a state is found, the
/// first city consistent with it is kept and inconsistent cities are
/// dropped. Without a state, the first city whose candidates narrow to one
/// (directly or by timezone) decides.
pub fn normalize_location(
    raw: &str,
    timezone: Option<&str>,
    gaz: &Gazetteer,
) -> Option<NormalizedLocation> {
    let words = phrase_words(raw);
    if words.is_empty() {
        return None;
    }
    let tz = timezone.and_then(|t| gaz.tz_offset(t));

    let mut hits = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let max = gaz.max_phrase_words().min(words.len() - i);
        let found = (1..=max)
            .rev()
            .find_map(|n| gaz.phrase(&words[i..i + n]).map(|m| (n, m)));
        match found {
            Some((n, meaning)) => {
                resolve_phrase(meaning, tz, gaz, &mut hits);
                i += n;
            }
            None => i += 1,
        }
    }

    let state = hits.iter().find_map(|h| match h {
        Hit::State(s) => Some(s.clone()),
        Hit::City(_) => None,
    });

    let (state, city) = match state {
        Some(state) => {
            let city = hits.iter().find_map(|h| match h {
                Hit::City(idxs) => idxs
                    .iter()
                    .map(|&c| gaz.city(c))
                    .find(|c| c.state == state)
                    .map(|c| c.name.clone()),
                Hit::State(_) => None,
            });
            (state, city)
        }
        None => {
            let entry = hits.iter().find_map(|h| match h {
                Hit::City(idxs) => pin_city(idxs, tz, gaz),
                Hit::State(_) => None,
            })?;
            let c = gaz.city(entry);
            (c.state.clone(), Some(c.name.clone()))
        }
    };

    let region = gaz.region_of(&state).ok()?;
    Some(NormalizedLocation {
        state,
        city,
        region,
    })
}

fn resolve_phrase(meaning: &PhraseMeaning, tz: Option<i32>, gaz: &Gazetteer, hits: &mut Vec<Hit>) {
    match meaning {
        PhraseMeaning::State(s) => hits.push(Hit::State(s.clone())),
        PhraseMeaning::City(idxs) => hits.push(Hit::City(idxs.clone())),
        PhraseMeaning::Ambiguous { state, cities } => {
            let same_state: Vec<usize> =
                cities.iter().copied().filter(|&c| &gaz.city(c).state == state).collect();
            if !same_state.is_empty() {
                hits.push(Hit::State(state.clone()));
                hits.push(Hit::City(same_state));
                return;
            }
            if let Some(tz) = tz {
                let tz_cities: Vec<usize> =
                    cities.iter().copied().filter(|&c| gaz.city(c).tz_offset == Some(tz)).collect();
                if !tz_cities.is_empty() && gaz.state_tz_offset(state) != Some(tz) {
                    hits.push(Hit::City(tz_cities));
                    return;
                }
            }
            hits.push(Hit::State(state.clone()));
        }
    }
}

fn pin_city(idxs: &[usize], tz: Option<i32>, gaz: &Gazetteer) -> Option<usize> {
    if idxs.len() == 1 {
        return Some(idxs[0]);
    }
    let tz = tz?;
    let mut matching = idxs.iter().copied().filter(|&c| gaz.city(c).tz_offset == Some(tz));
    match (matching.next(), matching.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}
