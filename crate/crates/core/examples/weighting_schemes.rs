//! The same resource under TF, TF-IRF, TF-IUF and TF-IBF. The tag everyone
//! uses drops out under the inverse schemes.

use folksonomy::{Folksonomy, Scheme, Vectorizer};

fn main() -> folksonomy::Result<()> {
    let mut f = Folksonomy::new();
    f.add_bookmark("ann", "rust-book", ["programming", "rust", "books"])?;
    f.add_bookmark("bob", "rust-book", ["programming", "rust"])?;
    f.add_bookmark("bob", "sicp", ["programming", "lisp", "books"])?;
    f.add_bookmark("cy", "sicp", ["programming", "classic"])?;
    f.add_bookmark("cy", "knuth", ["programming", "algorithms", "classic"])?;

    for scheme in Scheme::ALL {
        for normalize in [false, true] {
            let v = Vectorizer::new(scheme).normalize(normalize).vectorize_by_name(&f, "rust-book")?;
            let weights: Vec<String> = v.entries.iter().map(|&(t, w)| format!("{}:{w:.3}", f.tag_name(t))).collect();
            println!("{:<7} {:<10} {}", scheme, if normalize { "l2" } else { "raw" }, weights.join(" "));
        }
    }
    Ok(())
}
