//! A small movie ontology and a finite interpretation of it.

pub const MOVIE_ONTOLOGY: &str = "\
sort director person string slasher thriller horror movie
feature directed_by title
edge bot director 1
edge bot slasher 1
edge bot string 1
edge director person 1
edge slasher thriller 0.5
edge slasher horror 1
edge horror movie 1
edge thriller movie 1
edge string top 1
edge person top 1
edge movie top 1
";

pub const FILM_INTERPRETATION: &str = "\
elem psycho halloween hitchcock carpenter \"Psycho\" \"Halloween\" null
deg thriller halloween 0.5
deg horror halloween 1
deg slasher halloween 1
deg movie halloween 1
deg thriller psycho 1
deg horror psycho 1
deg slasher psycho 0.7
deg movie psycho 1
deg string \"Psycho\" 1
deg string \"Halloween\" 1
deg person hitchcock 1
deg director hitchcock 1
deg person carpenter 1
deg director carpenter 1
fun directed_by psycho hitchcock
fun directed_by halloween carpenter
fun directed_by * null
fun title psycho \"Psycho\"
fun title halloween \"Halloween\"
fun title * null
";
