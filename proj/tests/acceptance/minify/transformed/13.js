function n(n){var r={"&":"&amp;","<":"&lt;",">":"&gt;",'"':"&quot;","'":"&#39;"};return String(n).replace(/[&<>"']/g,function(n){return r[n]})}function r(r,t){var u="<ul>";for(var a=0;a<r.length;a++){u+='<li data-index="'+a+'">'+n(t(r[a],a))+"</li>"}return u+"</ul>"}
