function n(n){var t={"&":"&amp;","<":"&lt;",">":"&gt;",'"':"&quot;","'":"&#39;"};return String(n).replace(/[&<>"']/g,function(n){return t[n]})}function t(t,r){for(var u="<ul>",e=0;e<t.length;e++)u+='<li data-index="'+e+'">'+n(r(t[e],e))+"</li>";return u+"</ul>"}
