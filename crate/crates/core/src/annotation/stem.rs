/// Suffix-stripping stemmer used by the lexicon annotator.
///
/// Steps, each applied at most once and only when at least three letters
/// remain: plural (`ies` -> `y`, sibilant `es`, `s`), then one of `ing`,
/// `ion`, `ed` with doubled-consonant repair, then a final `e`.
pub fn stem(word: &str) -> String {
    let mut w = word.to_lowercase();

    if w.len() > 4 && w.ends_with("ies") {
        w.truncate(w.len() - 3);
        w.push('y');
    } else if w.ends_with("es") && ["ses", "xes", "zes", "ches", "shes"].iter().any(|s| w.ends_with(s)) && w.len() - 2 >= 3 {
        w.truncate(w.len() - 2);
    } else if w.ends_with('s') && !w.ends_with("ss") && w.chars().count() > 3 {
        w.pop();
    }

    for suffix in ["ing", "ion", "ed"] {
        if w.ends_with(suffix) && w.chars().count() - suffix.len() >= 3 {
            w.truncate(w.len() - suffix.len());
            let chars: Vec<char> = w.chars().collect();
            let n = chars.len();
            if n >= 2
                && chars[n - 1] == chars[n - 2]
                && !matches!(chars[n - 1], 'a' | 'e' | 'i' | 'o' | 'u' | 'l' | 's' | 'z')
            {
                w.pop();
            }
            break;
        }
    }

    if w.ends_with('e') && w.chars().count() > 3 {
        w.pop();
    }
    w
}
