//! Two users bookmark the same paper; prints the resource's weighted tag
//! union and the frequency triple of each tag.

use folksonomy::Folksonomy;

fn main() -> folksonomy::Result<()> {
    let mut f = Folksonomy::new();
    f.add_bookmark("u1", "r1", ["social-tagging", "research", "paper"])?;
    f.add_bookmark("u2", "r1", ["classification", "paper", "social-tagging", "social-bookmarking"])?;

    let r1 = f.resource_id("r1").unwrap();
    println!("{:<20} {:>3} {:>3} {:>3} {:>3}", "tag", "tf", "rf", "uf", "bf");
    for (&tag, &tf) in f.resource_tags(r1) {
        let fr = f.frequencies(tag);
        println!("{:<20} {:>3} {:>3} {:>3} {:>3}", f.tag_name(tag), tf, fr.rf, fr.uf, fr.bf);
    }
    Ok(())
}
