use crate::error::{Error, Result};

/// Recovers the first top-level JSON object from a model response.
///
/// Handles code fences, prose before or after the object, and trailing
/// commas before `}` or `]`. The returned text always parses as a JSON
/// object.
pub fn repair_json(raw: &str) -> Result<String> {
    let fail = |message: &str| Error::ExtractionFailed {
        model_id: String::new(),
        message: message.into(),
        raw_response: raw.into(),
    };
    let mut search = raw;
    while let Some(start) = search.find('{') {
        let tail = &search[start..];
        match balanced_object(tail) {
            Some(end) => {
                let candidate = strip_trailing_commas(&tail[..end]);
                if matches!(
                    serde_json::from_str::<serde_json::Value>(&candidate),
                    Ok(serde_json::Value::Object(_))
                ) {
                    return Ok(candidate);
                }
                search = &tail[1..];
            }
            None => return Err(fail("unterminated JSON object")),
        }
    }
    Err(fail("no JSON object found in response"))
}

/// Byte length of the object starting at `s[0] == '{'`, honoring strings
/// and escapes; `None` if it never closes.
fn balanced_object(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if in_string {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' | '[' => depth += 1,
            '}' | ']' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

fn strip_trailing_commas(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_string = false;
    let mut escaped = false;
    let chars: Vec<char> = s.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if in_string {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_string = false,
                _ => {}
            }
            out.push(c);
            continue;
        }
        if c == '"' {
            in_string = true;
        }
        if c == ',' {
            let next = chars[i + 1..].iter().find(|c| !c.is_whitespace());
            if matches!(next, Some('}') | Some(']')) {
                continue;
            }
        }
        out.push(c);
    }
    out
}
